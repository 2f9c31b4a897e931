"""Monte Carlo simulation of the workers in the fixed (bin) frame.

One time step runs in synchronous rounds.  In every round each moving worker
either finds its next bin held by a worker that will not move this round
(stopped earlier, or itself blocked this round) and becomes blocked, or it
advances one bin and runs a Bernoulli(s) trial, stopping on success.  With a
failure cap ``f_cap`` the f_cap-th failure of a step stops the worker in place
without a part ("exhausted"); it then obstructs followers like any stopped
worker.

A worker's trials within a step are i.i.d., so only the index of its first
success matters.  Each worker therefore draws one geometric variate per step
(the number of bins it would travel if unobstructed) from its own stream.
:func:`step` plays those draws out round by round; :func:`run` uses the
equivalent closed resolution

    moved[i] = min(target[i], moved[i+1] + gap[i] - 1)   (cyclic, greatest solution)

which the test-suite checks against the round engine.

Random streams: numpy ``PCG64`` generators built from
``SeedSequence(seed, spawn_key=(replica, 0, worker))`` for the trial draws and
``spawn_key=(replica, 1)`` for the initial placement.
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence, TextIO

import numpy as np

from .errors import DomainError, InvalidStateError, RingWalkError
from .state_space import DEFAULT_MAX_STATES, Params, State, enumerate_states, state_index_map

ROUND_CAP = 10**7
_BLOCK = 1 << 14
RNG_DESCRIPTION = "numpy PCG64; SeedSequence(seed, spawn_key=(replica, 0, worker)) per worker, (replica, 1) for placement"


class Status(enum.Enum):
    MOVING = "moving"
    SUCCESS = "stopped-success"
    BLOCKED = "stopped-blocked"
    EXHAUSTED = "stopped-exhausted"


@dataclass(frozen=True)
class WorldState:
    n: int
    positions: tuple[int, ...]
    status: tuple[Status, ...] = ()

    def __post_init__(self) -> None:
        pos = tuple(int(p) % self.n for p in self.positions)
        object.__setattr__(self, "positions", pos)
        if not self.status:
            object.__setattr__(self, "status", (Status.MOVING,) * len(pos))
        if len(set(pos)) != len(pos):
            raise InvalidStateError(f"two workers share a bin: {pos}")

    @property
    def k(self) -> int:
        return len(self.positions)

    @classmethod
    def from_state(cls, state: State, origin: int = 0) -> WorldState:
        """Place worker 1 at ``origin`` and the others by the state's gaps."""
        pos = [origin]
        for g in state.gaps[:-1]:
            pos.append(pos[-1] + g)
        return cls(state.n, tuple(pos))


def configuration_of_positions(positions: Sequence[int], n: int, blocked: int = 0) -> State:
    """Gap vector of workers listed in order of motion; the mask is passed through."""
    pos = [int(p) % n for p in positions]
    if len(set(pos)) != len(pos):
        raise InvalidStateError(f"two workers share a bin: {tuple(positions)}")
    k = len(pos)
    if k == 1:
        return State((n,), blocked)
    gaps = tuple((pos[(i + 1) % k] - pos[i]) % n for i in range(k))
    if sum(gaps) != n:
        raise InvalidStateError(f"positions {tuple(positions)} are not in cyclic order of motion")
    return State(gaps, blocked)


@dataclass(frozen=True)
class StepRecord:
    state: State
    moved: tuple[int, ...]
    status: tuple[Status, ...]
    rounds: int

    @property
    def blocked_workers(self) -> tuple[int, ...]:
        return tuple(i for i, st in enumerate(self.status) if st is Status.BLOCKED)

    @property
    def exhausted_workers(self) -> tuple[int, ...]:
        return tuple(i for i, st in enumerate(self.status) if st is Status.EXHAUSTED)

    @property
    def parts_collected(self) -> int:
        return sum(st is Status.SUCCESS for st in self.status)


def _draw_targets(rngs: np.random.Generator | Sequence[np.random.Generator], k: int, s: float) -> list[int]:
    if isinstance(rngs, np.random.Generator):
        return [int(x) for x in rngs.geometric(s, size=k)]
    if len(rngs) != k:
        raise DomainError(f"need one generator per worker ({k}), got {len(rngs)}")
    return [int(g.geometric(s)) for g in rngs]


def play_rounds(world: WorldState, targets: Sequence[int], f_cap: int | None = None) -> tuple[WorldState, StepRecord]:
    """Round-by-round dynamics for given first-success indices.

    ``targets[i]`` is the trial (bin count) at which worker i would first
    succeed.  Returns the world at the end of the step (statuses reset to
    moving) and the step record.
    """
    n, k = world.n, world.k
    pos = list(world.positions)
    status = [Status.MOVING] * k
    moved = [0] * k
    rounds = 0
    while Status.MOVING in status:
        rounds += 1
        if rounds > ROUND_CAP:
            raise RingWalkError(f"step did not terminate within {ROUND_CAP} rounds")
        holder = {p: i for i, p in enumerate(pos)}
        still = {i for i in range(k) if status[i] is not Status.MOVING}
        # blocking cascades backwards through trains of adjacent workers
        changed = True
        while changed:
            changed = False
            for i in range(k):
                if status[i] is Status.MOVING and i not in still:
                    ahead = holder.get((pos[i] + 1) % n)
                    if ahead is not None and ahead in still:
                        status[i] = Status.BLOCKED
                        still.add(i)
                        changed = True
        for i in range(k):
            if status[i] is not Status.MOVING:
                continue
            pos[i] = (pos[i] + 1) % n
            moved[i] += 1
            if moved[i] == targets[i]:
                status[i] = Status.SUCCESS
            elif f_cap is not None and moved[i] >= f_cap:
                status[i] = Status.EXHAUSTED
        if len(set(pos)) != k:
            raise RingWalkError(f"occupancy violated in round {rounds}: {pos}")
    mask = sum(1 << i for i in range(k) if status[i] is Status.BLOCKED)
    state = configuration_of_positions(pos, n, mask)
    return WorldState(n, tuple(pos)), StepRecord(state, tuple(moved), tuple(status), rounds)


def step(world: WorldState, params: Params, f_cap: int | None = None,
         rng: np.random.Generator | Sequence[np.random.Generator] | None = None) -> tuple[WorldState, StepRecord]:
    if world.k != params.k or world.n != params.n:
        raise DomainError("world does not match params")
    _check_f_cap(f_cap)
    if rng is None:
        rng = np.random.default_rng()
    return play_rounds(world, _draw_targets(rng, params.k, params.s), f_cap)


def resolve_moves(gaps: Sequence[int], targets: Sequence[int]) -> list[int]:
    """Bins travelled by each worker given its unobstructed target."""
    k = len(gaps)
    a = list(targets)
    if k == 1:
        return a
    changed = True
    while changed:
        changed = False
        for i in range(k - 1, -1, -1):
            lim = a[(i + 1) % k] + gaps[i] - 1
            if lim < a[i]:
                a[i] = lim
                changed = True
    return a


def _check_f_cap(f_cap: int | None) -> None:
    if f_cap is not None and (int(f_cap) != f_cap or f_cap < 1):
        raise DomainError(f"f_cap must be a positive integer, got {f_cap!r}")


# -- experiment harness -------------------------------------------------------

@dataclass
class SimulationStats:
    k: int
    n: int
    s: float
    seed: int
    steps: int
    burnin: int
    f_cap: int | None
    replicas: int
    per_worker_blocked: list[int]
    per_worker_exhausted: list[int]
    parts_collected: int
    occupancy: list[int] | None
    rng: str = RNG_DESCRIPTION
    final_positions: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def total_steps(self) -> int:
        return self.steps * self.replicas

    @property
    def blocked_fraction(self) -> float:
        """Blocked worker-steps over all worker-steps."""
        return sum(self.per_worker_blocked) / (self.k * self.total_steps)

    @property
    def exhausted_fraction(self) -> float:
        return sum(self.per_worker_exhausted) / (self.k * self.total_steps)

    def worker_blocked_fraction(self, worker: int = 0) -> float:
        return self.per_worker_blocked[worker] / self.total_steps

    def merge(self, other: SimulationStats) -> SimulationStats:
        key = ("k", "n", "s", "seed", "steps", "burnin", "f_cap")
        if any(getattr(self, a) != getattr(other, a) for a in key):
            raise DomainError("cannot merge runs with different settings")
        occ = None
        if self.occupancy is not None and other.occupancy is not None:
            occ = [a + b for a, b in zip(self.occupancy, other.occupancy)]
        return replace(
            self,
            replicas=self.replicas + other.replicas,
            per_worker_blocked=[a + b for a, b in zip(self.per_worker_blocked, other.per_worker_blocked)],
            per_worker_exhausted=[a + b for a, b in zip(self.per_worker_exhausted, other.per_worker_exhausted)],
            parts_collected=self.parts_collected + other.parts_collected,
            occupancy=occ,
            final_positions=self.final_positions + other.final_positions,
        )

    def to_json(self) -> dict:
        return {
            "params": {"k": self.k, "n": self.n, "s": self.s},
            "seed": self.seed,
            "steps": self.steps,
            "burnin": self.burnin,
            "f_cap": self.f_cap,
            "replicas": self.replicas,
            "rng": self.rng,
            "per_worker_blocked": list(self.per_worker_blocked),
            "per_worker_exhausted": list(self.per_worker_exhausted),
            "blocked_fraction": self.blocked_fraction,
            "worker1_blocked_fraction": self.worker_blocked_fraction(0),
            "exhausted_fraction": self.exhausted_fraction,
            "parts_collected": self.parts_collected,
            "occupancy": self.occupancy,
        }


def worker_streams(seed: int, replica: int, k: int) -> list[np.random.Generator]:
    return [
        np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replica, 0, w))))
        for w in range(k)
    ]


def placement_stream(seed: int, replica: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replica, 1))))


def random_world(n: int, k: int, rng: np.random.Generator) -> WorldState:
    """Uniformly random bins for k labelled workers in cyclic order."""
    bins = np.sort(rng.choice(n, size=k, replace=False))
    shift = int(rng.integers(k))
    return WorldState(n, tuple(int(b) for b in np.roll(bins, -shift)))


class _Targets:
    """Buffered per-worker geometric draws; one column per worker."""

    def __init__(self, rngs: Sequence[np.random.Generator], s: float):
        self.rngs = rngs
        self.s = s
        self.buf: list[list[int]] = []
        self.pos = _BLOCK

    def refill(self) -> None:
        cols = [g.geometric(self.s, size=_BLOCK).tolist() for g in self.rngs]
        self.buf = [list(t) for t in zip(*cols)]
        self.pos = 0

    def next(self) -> list[int]:
        if self.pos == _BLOCK:
            self.refill()
        t = self.buf[self.pos]
        self.pos += 1
        return t


def _run_replica(params: Params, steps: int, seed: int, burnin: int, f_cap: int | None,
                 replica: int, start: State | None, track_occupancy: bool,
                 max_states: int | None, trace: TextIO | None = None) -> SimulationStats:
    k, n = params.k, params.n
    index = state_index_map(enumerate_states(k, n, max_states)) if (track_occupancy or trace) else None
    world = WorldState.from_state(start) if start is not None else random_world(n, k, placement_stream(seed, replica))
    pos = list(world.positions)
    gaps = list(configuration_of_positions(pos, n).gaps)
    draws = _Targets(worker_streams(seed, replica, k), params.s)

    blocked = [0] * k
    exhausted = [0] * k
    parts = 0
    occ: Counter[int] = Counter()
    rng_k = range(k)
    for t in range(burnin + steps):
        target = draws.next()
        ex_mask = 0
        if f_cap is not None:
            for i in rng_k:
                if target[i] > f_cap:
                    target[i] = f_cap
                    ex_mask |= 1 << i
        a = resolve_moves(gaps, target)
        mask = 0
        for i in rng_k:
            if a[i] < target[i]:
                mask |= 1 << i
        ex_mask &= ~mask
        gaps = [gaps[i] + a[(i + 1) % k] - a[i] for i in rng_k]
        for i in rng_k:
            pos[i] = (pos[i] + a[i]) % n
        if t < burnin:
            continue
        if mask or ex_mask:
            for i in rng_k:
                if mask >> i & 1:
                    blocked[i] += 1
                elif ex_mask >> i & 1:
                    exhausted[i] += 1
            parts += k - bin(mask).count("1") - bin(ex_mask).count("1")
        else:
            parts += k
        if index is not None:
            idx = index[(tuple(gaps), mask)]
            occ[idx] += 1
            if trace is not None:
                trace.write(f"{replica},{t - burnin},{idx},{mask}\n")

    occupancy = [occ.get(i, 0) for i in range(len(index))] if (track_occupancy and index is not None) else None
    return SimulationStats(
        k=k, n=n, s=params.s, seed=seed, steps=steps, burnin=burnin, f_cap=f_cap, replicas=1,
        per_worker_blocked=blocked, per_worker_exhausted=exhausted, parts_collected=parts,
        occupancy=occupancy, final_positions=[tuple(pos)],
    )


def run(params: Params, steps: int, seed: int, burnin: int = 10**4, f_cap: int | None = None,
        replicas: int = 1, *, start: State | None = None, track_occupancy: bool = True,
        processes: int | None = None, max_states: int | None = DEFAULT_MAX_STATES,
        trace: TextIO | None = None) -> SimulationStats:
    """Simulate ``replicas`` independent chains of ``burnin + steps`` steps each.

    Replica r uses its own streams derived from ``(seed, r)``, so results do
    not depend on ``processes``.  ``trace`` receives CSV rows
    ``replica,step,state_index,blocked_mask`` (header included) and forces a
    sequential run.
    """
    if steps < 1 or burnin < 0 or replicas < 1:
        raise DomainError("need steps >= 1, burnin >= 0 and replicas >= 1")
    _check_f_cap(f_cap)
    if start is not None and (start.k != params.k or start.n != params.n):
        raise DomainError(f"start state {start} does not match k={params.k}, n={params.n}")
    args = [(params, steps, seed, burnin, f_cap, r, start, track_occupancy, max_states) for r in range(replicas)]
    if trace is not None:
        trace.write("replica,step,state_index,blocked_mask\n")
        parts = [_run_replica(*a, trace=trace) for a in args]
    elif processes and processes > 1 and replicas > 1:
        with ProcessPoolExecutor(max_workers=processes) as pool:
            parts = list(pool.map(_run_replica, *zip(*args)))
    else:
        parts = [_run_replica(*a) for a in args]
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    return out


def empirical_state_distribution(stats: SimulationStats) -> np.ndarray:
    if stats.occupancy is None:
        raise DomainError("run was made without occupancy tracking")
    occ = np.asarray(stats.occupancy, dtype=float)
    total = occ.sum()
    if total == 0:
        raise DomainError("empty run: no recorded steps")
    return occ / total


def one_step_frequencies(params: Params, start: State, trials: int, seed: int,
                         f_cap: int | None = None,
                         max_states: int | None = DEFAULT_MAX_STATES) -> np.ndarray:
    """Empirical distribution of the state after one step from ``start``.

    Each trial restarts from ``start``; draws come from the replica-0 worker
    streams.  Aligned with the canonical state order.
    """
    _check_f_cap(f_cap)
    k, n = params.k, params.n
    states = enumerate_states(k, n, max_states)
    index = state_index_map(states)
    rngs = worker_streams(seed, 0, k)
    target = np.column_stack([g.geometric(params.s, size=trials) for g in rngs])
    if f_cap is not None:
        target = np.minimum(target, f_cap)
    gaps = np.array(start.gaps)
    a = target.copy()
    # greatest cyclic fixed point; k sweeps propagate any constraint around the ring
    for _ in range(k + 1):
        for i in range(k - 1, -1, -1):
            np.minimum(a[:, i], a[:, (i + 1) % k] + gaps[i] - 1, out=a[:, i])
    blocked = a < target
    new_gaps = gaps[None, :] + np.roll(a, -1, axis=1) - a
    masks = (blocked * (1 << np.arange(k))).sum(axis=1)
    counts = np.zeros(len(states))
    keys, cnt = np.unique(np.column_stack([new_gaps, masks]), axis=0, return_counts=True)
    for row, c in zip(keys, cnt):
        counts[index[(tuple(int(x) for x in row[:-1]), int(row[-1]))]] = c
    return counts / trials
