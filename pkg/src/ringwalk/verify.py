"""Invariant suites that cross-check the closed forms against independent routes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import digraph as dg
from .markov import (
    blockage_fraction_closed_form,
    blockage_fraction_from_distribution,
    build_transition_matrix,
    closed_form_stationary,
    power_iteration_stationary,
    stationarity_residual,
)
from .rearrangement import costate, phi
from .simulator import empirical_state_distribution, run
from .state_space import (
    DEFAULT_MAX_STATES,
    Params,
    count_states_with_blockages,
    count_total_states,
    enumerate_states,
    rank,
    unrank,
)

EXACT_TOL = 1e-12
EIGEN_TOL = 1e-10
BFS_MAX_VERTICES = 2000


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def check_state_space(k: int, n: int, max_states: int | None = DEFAULT_MAX_STATES) -> list[Check]:
    states = enumerate_states(k, n, max_states)
    total = count_total_states(k, n)
    by_b = sum(count_states_with_blockages(b, k, n) for b in range(k))
    ok_count = len(states) == total == by_b
    bad = [i for i, st in enumerate(states) if rank(st, k, n) != i or unrank(i, k, n) != st]
    return [
        Check("state count", ok_count, f"enumerated={len(states)} M={total} sum_b N={by_b}"),
        Check("rank/unrank round trip", not bad, f"first mismatch at {bad[0]}" if bad else f"{len(states)} states"),
    ]


def check_markov(k: int, n: int, s: float, exact_tol: float = EXACT_TOL, eigen_tol: float = EIGEN_TOL,
                 max_states: int | None = DEFAULT_MAX_STATES) -> list[Check]:
    params = Params(k, n, s)
    tm = build_transition_matrix(k, n, s, max_states)
    p, states = tm.p, tm.states
    out = []

    dev = float(np.max(np.abs(tm.row_sums() - 1.0)))
    out.append(Check("row sums", dev <= exact_tol and bool((p > 0).all()),
                     f"max |row sum - 1| = {dev:.3e}, min entry = {p.min():.3e}"))

    nu = closed_form_stationary(k, n, s, max_states)
    res = stationarity_residual(nu, tm)
    out.append(Check("nuP = nu", res <= exact_tol, f"||nuP - nu||_inf = {res:.3e}"))

    pw = power_iteration_stationary(tm)
    diff = float(np.max(np.abs(pw.nu - nu.nu)))
    out.append(Check("power iteration = closed form", diff <= eigen_tol,
                     f"max diff = {diff:.3e} after {pw.iterations} iterations"))

    b_closed = blockage_fraction_closed_form(k, n, params.r)
    b_eig = blockage_fraction_from_distribution(pw.nu, states)
    out.append(Check("blockage closed form = eigen mass", abs(b_closed - b_eig) <= exact_tol,
                     f"B = {b_closed!r}, eigen = {b_eig!r}"))

    index = {st: i for i, st in enumerate(states)}
    unblocked = [i for i, st in enumerate(states) if st.blocked == 0]
    star = {i: index[costate(states[i])] for i in unblocked}
    sym_bad = next(((i, j) for i in unblocked for j in unblocked if p[i, j] != p[star[j], star[i]]), None)
    out.append(Check("p(X,Y) = p(Y*,X*)", sym_bad is None,
                     "all unblocked pairs" if sym_bad is None else
                     f"{states[sym_bad[0]]} -> {states[sym_bad[1]]}"))

    rpow = [params.r**b for b in range(k)]
    col_bad = None
    for j, st in enumerate(states):
        if st.blocked:
            w = index[st.unblocked()]
            if not np.array_equal(p[:, j], rpow[st.num_blocked] * p[:, w]):
                col_bad = st
                break
    out.append(Check("blocked columns = r^b * unblocked column", col_bad is None,
                     "exact" if col_bad is None else f"column {col_bad}"))

    row_bad = next((st for i, st in enumerate(states)
                    if st.blocked and not np.array_equal(p[i], p[index[st.unblocked()]])), None)
    out.append(Check("blocked rows = unblocked rows", row_bad is None,
                     "exact" if row_bad is None else f"row {row_bad}"))
    return out


def check_digraph(k: int, n: int, max_vertices: int = BFS_MAX_VERTICES) -> list[Check]:
    g = dg.build_digraph(k, n)
    sc = dg.check_self_converse(g)
    out = [Check("digraph self-converse", sc.ok,
                 f"{len(g.vertices)} vertices, {g.num_edges} edges" if sc.ok else f"edge {sc.violation}")]
    if k >= 2 and n > k:
        out.append(Check("digraph strongly connected", dg.is_strongly_connected(g)))
    if len(g.vertices) <= max_vertices:
        dist = dg.all_pairs_distances(g)
        bad = None
        for u, x in enumerate(g.vertices):
            for v, y in enumerate(g.vertices):
                if dist[u, v] != phi([b - a for a, b in zip(x, y)]):
                    bad = (x, y, int(dist[u, v]))
                    break
            if bad:
                break
        npairs = len(g.vertices) ** 2
        out.append(Check("BFS distance = phi", bad is None,
                         f"{npairs} ordered pairs" if bad is None else f"counterexample {bad}"))
    return out


def check_simulation(k: int, n: int, s: float, steps: int, seed: int, burnin: int = 10**4,
                     f_cap: int | None = None) -> list[Check]:
    """Monte Carlo agreement; tolerances scale as 1/sqrt(steps).

    The occupancy bound is four times the summed per-state binomial standard
    deviations, which leaves room for correlation between successive steps and
    grows with the size of the state space.
    """
    params = Params(k, n, s)
    stats = run(params, steps, seed, burnin, f_cap)
    b = blockage_fraction_closed_form(k, n, params.r)
    tol_b = 3.0 / math.sqrt(steps)
    emp_b = stats.worker_blocked_fraction(0)
    nu = closed_form_stationary(k, n, s).nu
    tol_l1 = 4.0 * float(np.sqrt(nu * (1.0 - nu) / steps).sum())
    l1 = float(np.abs(empirical_state_distribution(stats) - nu).sum())
    return [
        Check("simulated blockage", abs(emp_b - b) <= tol_b, f"empirical {emp_b:.6f} vs {b:.6f} (tol {tol_b:.2e})"),
        Check("simulated occupancy", l1 <= tol_l1, f"L1 = {l1:.5f} (tol {tol_l1:.2e})"),
    ]


def run_all(k: int, n: int, s: float, exact_tol: float = EXACT_TOL, eigen_tol: float = EIGEN_TOL,
            mc_steps: int = 0, seed: int = 0, max_states: int | None = DEFAULT_MAX_STATES) -> list[Check]:
    checks = check_state_space(k, n, max_states)
    checks += check_markov(k, n, s, exact_tol, eigen_tol, max_states)
    checks += check_digraph(k, n)
    if mc_steps:
        checks += check_simulation(k, n, s, mc_steps, seed)
    return checks
