"""Transition matrix, stationary density and blockage frequency of the ring chain.

The one-step probability from state X to state Y is

    p(X, Y) = r**b(Y) * (s**k / (1 - q**k)) * q**phi(Y - X)

with q = 1 - s, r = q / s, b(Y) the number of blocked workers in Y and phi the
shortest rearrangement length on physical gaps.  Blocked markers on X play no
role.  Every probability here is evaluated through ``_entry`` so that the
scalar and the matrix route produce bit-identical floats, and so that
``p(X, W^b) == r**b * p(X, W)`` holds exactly in floating point.

The stationary density puts weight r**b on each state with b blockages.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .rearrangement import displacement, phi
from .state_space import (
    DEFAULT_MAX_STATES,
    Params,
    State,
    check_cap,
    check_kn,
    count_states_with_blockages,
    enumerate_states,
)


def _normaliser(p: Params) -> float:
    return p.s**p.k / (1.0 - p.q**p.k)


def _entry(rb: float, c: float, ql: float) -> float:
    return rb * (c * ql)


def transition_probability(xi: State, xj: State, params: Params) -> float:
    if xi.k != params.k or xi.n != params.n:
        raise DomainError(f"state {xi} does not match k={params.k}, n={params.n}")
    l = phi(displacement(xi, xj))
    return _entry(params.r**xj.num_blocked, _normaliser(params), params.q**l)


@dataclass(frozen=True)
class TransitionMatrix:
    params: Params
    states: tuple[State, ...]
    p: np.ndarray

    @property
    def order(self) -> int:
        return len(self.states)

    def row_sums(self) -> np.ndarray:
        return self.p.sum(axis=1)


def _phi_table(configs: np.ndarray) -> np.ndarray:
    """phi(Y - X) for every ordered pair of configuration rows."""
    d = configs[None, :, :] - configs[:, None, :]
    g = np.cumsum(d, axis=2)
    k = configs.shape[1]
    return g.sum(axis=2) - k * g.min(axis=2)


def build_transition_matrix(k: int, n: int, s: float,
                            max_states: int | None = DEFAULT_MAX_STATES) -> TransitionMatrix:
    params = Params(k, n, s)
    check_cap(k, n, max_states)
    states = tuple(enumerate_states(k, n, max_states))

    configs: dict[tuple[int, ...], int] = {}
    cfg_of = np.empty(len(states), dtype=np.int64)
    for i, st in enumerate(states):
        cfg_of[i] = configs.setdefault(st.gaps, len(configs))
    cfg_arr = np.array(list(configs), dtype=np.int64).reshape(len(configs), k)
    lengths = _phi_table(cfg_arr)

    # powers through Python floats, exactly as transition_probability does
    c = _normaliser(params)
    qpow = np.array([params.q**l for l in range(int(lengths.max()) + 1)])
    rpow = np.array([params.r**b for b in range(k)])
    base = c * qpow[lengths]
    blocks = np.array([st.num_blocked for st in states])
    p = rpow[blocks][None, :] * base[np.ix_(cfg_of, cfg_of)]
    return TransitionMatrix(params, states, p)


@dataclass(frozen=True)
class StationaryDistribution:
    nu: np.ndarray
    states: tuple[State, ...] | None = None
    iterations: int | None = None

    def __len__(self) -> int:
        return len(self.nu)


def omega_norm(k: int, n: int, r: float) -> float:
    return sum(count_states_with_blockages(b, k, n) * r**b for b in range(k))


def closed_form_stationary(k: int, n: int, s: float,
                           max_states: int | None = DEFAULT_MAX_STATES) -> StationaryDistribution:
    params = Params(k, n, s)
    states = tuple(enumerate_states(k, n, max_states))
    norm = omega_norm(k, n, params.r)
    weights = np.array([params.r**st.num_blocked for st in states])
    return StationaryDistribution(weights / norm, states)


def stationarity_residual(nu: np.ndarray | StationaryDistribution, p: np.ndarray | TransitionMatrix) -> float:
    """Max-norm of nu P - nu."""
    nu = getattr(nu, "nu", nu)
    p = getattr(p, "p", p)
    return float(np.max(np.abs(nu @ p - nu)))


def power_iteration_stationary(p: np.ndarray | TransitionMatrix, tol: float = 1e-15,
                               max_iter: int = 10**6,
                               start: np.ndarray | None = None) -> StationaryDistribution:
    """Left fixed vector of a row-stochastic matrix by repeated v <- v P."""
    states = p.states if isinstance(p, TransitionMatrix) else None
    mat = getattr(p, "p", p)
    m = mat.shape[0]
    if mat.shape != (m, m):
        raise DomainError(f"transition matrix must be square, got shape {mat.shape}")
    v = np.full(m, 1.0 / m) if start is None else np.asarray(start, dtype=float)
    if v.shape != (m,) or (v < 0).any() or v.sum() <= 0:
        raise DomainError("start vector must be a non-negative vector of matching length")
    v = v / v.sum()
    for it in range(1, max_iter + 1):
        w = v @ mat
        w /= w.sum()
        if np.max(np.abs(w - v)) <= tol:
            return StationaryDistribution(w, states, it)
        v = w
    raise ConvergenceError(f"power iteration did not reach tol={tol} in {max_iter} steps")


def blockage_fraction_closed_form(k: int, n: int, r: float) -> float:
    """Long-run fraction of steps on which a given worker is blocked."""
    check_kn(k, n)
    if not r > 0:
        raise DomainError(f"r must be positive, got {r!r}")
    num = 0.0
    for b in range(k - 1):
        num += float(comb(k - 1, b) * comb(n - b - 2, k - b - 2)) * r ** (b + 1)
    den = 0.0
    for b in range(k):
        den += float(comb(k, b) * comb(n - b - 1, k - b - 1)) * r**b
    return num / den


def blockage_fraction_from_distribution(nu: np.ndarray | StationaryDistribution,
                                        states: Sequence[State] | None = None,
                                        worker: int = 0) -> float:
    """Total stationary mass of the states in which ``worker`` (0-based) is blocked."""
    if states is None:
        states = getattr(nu, "states", None)
        if states is None:
            raise DomainError("states are required to locate the blocked ones")
    vec = np.asarray(getattr(nu, "nu", nu))
    if len(vec) != len(states):
        raise DomainError(f"distribution has {len(vec)} entries but there are {len(states)} states")
    return float(sum(vec[i] for i, st in enumerate(states) if st.blocked >> worker & 1))
