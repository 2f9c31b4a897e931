"""Displacement algebra in the moving frame.

A single failure by worker ``i+1`` (it moves one more bin) lengthens gap ``i``
and shortens gap ``i+1``; the vector of that change is the generator
``delta_vector(i)``.  Index convention: ``i`` is 1-based here, as are
worker numbers in the docs; the returned vectors and all arrays are ordinary
0-based Python sequences, so ``delta_vector(i, k)[i - 1] == 1``.

Any displacement ``d`` with zero sum decomposes uniquely as a non-negative
combination of generators with at least one zero coefficient.  The
coefficients are the prefix sums of ``d`` shifted so their minimum is zero,
and their total is the shortest rearrangement length ``phi(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Sequence

from .errors import DomainError, InvalidStateError
from .state_space import State


@dataclass(frozen=True)
class PathDecomposition:
    beta: tuple[int, ...]

    @property
    def length(self) -> int:
        return sum(self.beta)


def delta_vector(i: int, k: int) -> tuple[int, ...]:
    if not 1 <= i <= k:
        raise DomainError(f"generator index must be in [1, {k}], got {i}")
    v = [0] * k
    v[i - 1] += 1
    v[i % k] -= 1
    return tuple(v)


def apply_generators(coeffs: Sequence[int]) -> tuple[int, ...]:
    """Sum of ``coeffs[i-1] * delta_vector(i)``, i.e. the product A @ coeffs."""
    k = len(coeffs)
    return tuple(coeffs[j] - coeffs[j - 1] for j in range(k))


def _check_zero_sum(d: Sequence[int]) -> tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if sum(d) != 0:
        raise DomainError(f"displacement components must sum to 0, got {d}")
    return d


def displacement(x: State, y: State) -> tuple[int, ...]:
    """``y - x`` on physical gaps; blocked entries count as 1."""
    if x.k != y.k or x.n != y.n:
        raise InvalidStateError(f"states {x} and {y} belong to different (k, n)")
    return tuple(b - a for a, b in zip(x.gaps, y.gaps))


def gamma(d: Sequence[int]) -> tuple[int, ...]:
    return tuple(accumulate(_check_zero_sum(d)))


def canonical_beta(d: Sequence[int]) -> PathDecomposition:
    g = gamma(d)
    # only the minimum value matters, not which index attains it
    low = min(g)
    return PathDecomposition(tuple(x - low for x in g))


def phi(d: Sequence[int]) -> int:
    g = gamma(d)
    return sum(g) - len(g) * min(g)


def costate(x: State) -> State:
    """Reverse the gaps and the blocked mask together (an involution)."""
    k = x.k
    mask = 0
    for i in range(k):
        if x.blocked >> i & 1:
            mask |= 1 << (k - 1 - i)
    return State(x.gaps[::-1], mask)
