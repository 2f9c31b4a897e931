"""States of the k-worker ring: configurations, blocked markers, counting and ranking.

A *configuration* is the tuple of forward distances between consecutive
workers, ``gaps[i]`` being the distance from worker ``i+1`` to worker ``i+2``
(workers are 1-based in prose, slots are 0-based in code).  A *state* adds a
bit mask: bit ``i`` set means worker ``i+1`` stopped at distance 1 because it
was blocked, written ``1*`` in labels.  A blocked entry still has magnitude 1,
so ``sum(gaps) == n`` holds for every state.

States are ordered by gaps (lexicographic, ascending) and then by mask
(as an integer, ascending).  ``rank``/``unrank`` realise that order without
building the list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .errors import DomainError, InvalidStateError, StateSpaceTooLarge

DEFAULT_MAX_STATES = 10**6


@dataclass(frozen=True)
class Params:
    """Model parameters: ``k`` workers, ``n`` bins, success probability ``s``."""

    k: int
    n: int
    s: float

    def __post_init__(self) -> None:
        check_kn(self.k, self.n)
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"s must lie strictly between 0 and 1, got {self.s!r}")

    @property
    def q(self) -> float:
        return 1.0 - self.s

    @property
    def r(self) -> float:
        return self.q / self.s


def check_kn(k: int, n: int) -> None:
    if int(k) != k or int(n) != n:
        raise DomainError(f"k and n must be integers, got k={k!r}, n={n!r}")
    if k < 1:
        raise DomainError(f"need k >= 1, got k={k}")
    if n < k:
        raise DomainError(f"need n >= k, got k={k}, n={n}")


@dataclass(frozen=True, order=True)
class State:
    gaps: tuple[int, ...]
    blocked: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "gaps", tuple(int(g) for g in self.gaps))
        problem = _state_problem(self.gaps, self.blocked)
        if problem:
            raise InvalidStateError(problem)

    @property
    def k(self) -> int:
        return len(self.gaps)

    @property
    def n(self) -> int:
        return sum(self.gaps)

    @property
    def num_blocked(self) -> int:
        return bin(self.blocked).count("1")

    def is_blocked(self, worker: int) -> bool:
        """True if 0-based ``worker`` is blocked."""
        return bool(self.blocked >> worker & 1)

    def unblocked(self) -> State:
        return State(self.gaps, 0)

    def label(self) -> str:
        return ",".join(
            f"{g}*" if self.blocked >> i & 1 else str(g) for i, g in enumerate(self.gaps)
        )

    def to_json(self) -> dict:
        return {
            "gaps": list(self.gaps),
            "blocked": [i for i in range(self.k) if self.blocked >> i & 1],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> State:
        if isinstance(obj, str):
            obj = json.loads(obj)
        mask = 0
        for i in obj.get("blocked", []):
            mask |= 1 << int(i)
        return cls(tuple(obj["gaps"]), mask)

    @classmethod
    def parse(cls, label: str) -> State:
        """Inverse of :meth:`label`, e.g. ``"1*,2,4"``."""
        gaps = []
        mask = 0
        for i, tok in enumerate(t.strip() for t in label.split(",")):
            if tok.endswith("*"):
                mask |= 1 << i
                tok = tok[:-1]
            try:
                gaps.append(int(tok))
            except ValueError:
                raise InvalidStateError(f"bad gap entry {tok!r} in {label!r}") from None
        return cls(tuple(gaps), mask)

    def __str__(self) -> str:
        return f"({self.label()})"


def _state_problem(gaps: Sequence[int], blocked: int, k: int | None = None,
                   n: int | None = None) -> str | None:
    kk = len(gaps)
    if kk < 1:
        return "a state needs at least one gap"
    if k is not None and kk != k:
        return f"expected {k} gaps, got {kk}"
    if any(g < 1 for g in gaps):
        return f"gaps must be positive: {tuple(gaps)}"
    if n is not None and sum(gaps) != n:
        return f"gaps {tuple(gaps)} sum to {sum(gaps)}, not n={n}"
    if blocked < 0 or blocked >> kk:
        return f"blocked mask {blocked:#b} has bits outside {kk} workers"
    for i in range(kk):
        if blocked >> i & 1 and gaps[i] != 1:
            return f"worker {i + 1} is marked blocked but its gap is {gaps[i]}"
    if bin(blocked).count("1") > kk - 1:
        return "at most k-1 workers can be blocked"
    return None


def validate_state(gaps: Sequence[int], blocked: int, k: int, n: int) -> bool:
    try:
        return _state_problem(tuple(gaps), int(blocked), k, n) is None
    except (TypeError, ValueError):
        return False


def _check_state(state: State, k: int, n: int) -> None:
    if state.k != k or state.n != n:
        raise InvalidStateError(f"state {state} is not a state of (k={k}, n={n})")


# -- counting ---------------------------------------------------------------

def count_configurations(k: int, n: int) -> int:
    check_kn(k, n)
    return comb(n - 1, k - 1)


def count_states_with_blockages(b: int, k: int, n: int) -> int:
    check_kn(k, n)
    if not 0 <= b <= k - 1:
        raise DomainError(f"number of blockages must be in [0, {k - 1}], got {b}")
    return comb(k, b) * comb(n - b - 1, k - b - 1)


def count_total_states(k: int, n: int) -> int:
    check_kn(k, n)
    return sum(count_states_with_blockages(b, k, n) for b in range(k))


def _compositions_count(m: int, total: int) -> int:
    if m == 0:
        return 1 if total == 0 else 0
    if total < m:
        return 0
    return comb(total - 1, m - 1)


@lru_cache(maxsize=None)
def _marked_count(m: int, total: int) -> int:
    # compositions of `total` into m parts where every part equal to 1 may
    # additionally carry a star; no cap on the number of stars
    return sum(comb(m, b) * _compositions_count(m - b, total - b) for b in range(m + 1))


# -- enumeration and ranking ------------------------------------------------

def iter_configurations(k: int, n: int) -> Iterator[tuple[int, ...]]:
    """Positive compositions of n into k parts, lexicographically ascending."""
    check_kn(k, n)
    prefix: list[int] = []

    def rec(m: int, total: int) -> Iterator[tuple[int, ...]]:
        if m == 1:
            yield (*prefix, total)
            return
        for v in range(1, total - m + 2):
            prefix.append(v)
            yield from rec(m - 1, total - v)
            prefix.pop()

    yield from rec(k, n)


def _submasks_ascending(support: int) -> Iterator[int]:
    # all submasks of `support` in increasing integer order
    bits = [1 << i for i in range(support.bit_length()) if support >> i & 1]
    for code in range(1 << len(bits)):
        m = 0
        for j, bit in enumerate(bits):
            if code >> j & 1:
                m |= bit
        yield m


def ones_mask(gaps: Sequence[int]) -> int:
    """Mask of the slots whose gap equals 1 (the slots that may be blocked)."""
    m = 0
    for i, g in enumerate(gaps):
        if g == 1:
            m |= 1 << i
    return m


def check_cap(k: int, n: int, max_states: int | None = DEFAULT_MAX_STATES) -> int:
    total = count_total_states(k, n)
    if max_states is not None and total > max_states:
        raise StateSpaceTooLarge(
            f"(k={k}, n={n}) has {total} states, above the cap of {max_states}"
        )
    return total


def enumerate_states(k: int, n: int, max_states: int | None = DEFAULT_MAX_STATES) -> list[State]:
    check_cap(k, n, max_states)
    full = (1 << k) - 1
    out = []
    for gaps in iter_configurations(k, n):
        for mask in _submasks_ascending(ones_mask(gaps)):
            if mask != full or k == 0:
                out.append(State(gaps, mask))
    return out


def rank(state: State, k: int, n: int) -> int:
    check_kn(k, n)
    _check_state(state, k, n)
    gaps, mask = state.gaps, state.blocked
    if n == k:
        # single configuration (1,...,1); masks 0 .. 2^k - 2
        return mask
    idx = 0
    remaining = n
    ones_before = 0
    for j in range(k - 1):
        m = k - j - 1
        for v in range(1, gaps[j]):
            idx += (2 << ones_before if v == 1 else 1 << ones_before) * _marked_count(m, remaining - v)
        remaining -= gaps[j]
        ones_before += gaps[j] == 1
    # position of the mask among the submasks of the ones-support
    code = 0
    j = 0
    support = ones_mask(gaps)
    for i in range(k):
        if support >> i & 1:
            code |= (mask >> i & 1) << j
            j += 1
    return idx + code


def unrank(index: int, k: int, n: int) -> State:
    total = count_total_states(k, n)
    if not 0 <= index < total:
        raise IndexError(f"state index {index} out of range [0, {total})")
    if n == k:
        return State((1,) * k, index)
    gaps = []
    remaining = n
    ones_before = 0
    for j in range(k - 1):
        m = k - j - 1
        v = 1
        while True:
            block = (2 << ones_before if v == 1 else 1 << ones_before) * _marked_count(m, remaining - v)
            if index < block:
                break
            index -= block
            v += 1
        gaps.append(v)
        remaining -= v
        ones_before += v == 1
    gaps.append(remaining)
    support = ones_mask(gaps)
    mask = 0
    j = 0
    for i in range(k):
        if support >> i & 1:
            mask |= (index >> j & 1) << i
            j += 1
    return State(tuple(gaps), mask)


def state_index_map(states: Sequence[State]) -> dict[tuple[tuple[int, ...], int], int]:
    """Lookup table ``(gaps, mask) -> position`` for an enumerated state list."""
    return {(st.gaps, st.blocked): i for i, st in enumerate(states)}
