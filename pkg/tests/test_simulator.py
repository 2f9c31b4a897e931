import io

import numpy as np
import pytest

from ringwalk import errors
from ringwalk.markov import blockage_fraction_closed_form, build_transition_matrix, closed_form_stationary
from ringwalk.simulator import (
    SimulationStats,
    Status,
    WorldState,
    configuration_of_positions,
    empirical_state_distribution,
    one_step_frequencies,
    play_rounds,
    random_world,
    resolve_moves,
    run,
    step,
    worker_streams,
)
from ringwalk.state_space import Params, State


def cyclic_order(positions, n):
    start = positions[0]
    return [(p - start) % n for p in positions]


def test_configuration_of_positions():
    assert configuration_of_positions((2, 5, 11, 13), 16) == State((3, 6, 2, 5))
    assert configuration_of_positions((4,), 9) == State((9,))
    for c in range(16):
        moved = [(p + c) % 16 for p in (2, 5, 11, 13)]
        assert configuration_of_positions(moved, 16) == State((3, 6, 2, 5))
    with pytest.raises(errors.InvalidStateError):
        configuration_of_positions((2, 2, 5), 8)
    with pytest.raises(errors.InvalidStateError):
        configuration_of_positions((5, 2, 11), 16)


def test_two_workers_same_end_configuration():
    world = WorldState.from_state(State((4, 4)))
    # worker 2 succeeds on its first bin; worker 1 fails three times, then succeeds
    _, rec = play_rounds(world, [4, 1])
    assert rec.state == State((1, 7)) and rec.blocked_workers == ()
    # one more failure instead of the success: worker 1 then finds worker 2 in its way
    _, rec = play_rounds(world, [5, 1])
    assert rec.state == State((1, 7), 0b01)
    assert rec.moved == (4, 1)
    _, rec = play_rounds(world, [9, 1])
    assert rec.state == State((1, 7), 0b01)
    assert rec.status == (Status.BLOCKED, Status.SUCCESS)
    assert rec.parts_collected == 1


def test_blocking_cascades_through_a_train():
    # workers at 0,1,2 on 6 bins; the front one stops after one bin
    world = WorldState(6, (0, 1, 2))
    _, rec = play_rounds(world, [5, 5, 1])
    assert rec.state == State((1, 1, 4), 0b011)
    assert rec.moved == (1, 1, 1)


def test_single_worker_never_blocked():
    rng = np.random.default_rng(3)
    world = WorldState(9, (4,))
    for _ in range(200):
        world, rec = step(world, Params(1, 9, 0.2), rng=rng)
        assert rec.blocked_workers == () and rec.state == State((9,))


@pytest.mark.parametrize("f_cap", [None, 1, 2, 5])
def test_step_invariants(f_cap):
    params = Params(4, 9, 0.3)
    rngs = worker_streams(5, 0, 4)
    world = random_world(9, 4, np.random.default_rng(1))
    for _ in range(500):
        new, rec = step(world, params, f_cap, rngs)
        assert len(set(new.positions)) == 4
        assert cyclic_order(new.positions, 9) == sorted(cyclic_order(new.positions, 9))
        assert rec.state == configuration_of_positions(new.positions, 9, rec.state.blocked)
        assert rec.parts_collected == 4 - len(rec.blocked_workers) - len(rec.exhausted_workers)
        if f_cap is None:
            assert rec.exhausted_workers == ()
        else:
            assert max(rec.moved) <= f_cap
        for i in range(4):
            # moved distance is consistent with the gap change
            ahead = (i + 1) % 4
            g_old = (world.positions[ahead] - world.positions[i]) % 9
            assert rec.state.gaps[i] == g_old + rec.moved[ahead] - rec.moved[i]
        world = new


def test_resolver_matches_rounds():
    rng = np.random.default_rng(2024)
    for _ in range(5000):
        k = int(rng.integers(1, 7))
        n = int(rng.integers(k, 14))
        world = random_world(n, k, rng)
        targets = [int(t) for t in rng.geometric(rng.uniform(0.05, 0.95), size=k)]
        f_cap = None if rng.random() < 0.5 else int(rng.integers(1, 6))
        _, rec = play_rounds(world, targets, f_cap)
        capped = [min(t, f_cap) if f_cap else t for t in targets]
        gaps = configuration_of_positions(world.positions, n).gaps
        assert resolve_moves(gaps, capped) == list(rec.moved)


def test_high_success_rarely_blocks():
    stats = run(Params(3, 7, 0.99), 20000, seed=4, burnin=100)
    b = blockage_fraction_closed_form(3, 7, 0.01 / 0.99)
    assert stats.blocked_fraction < 0.01
    assert abs(stats.worker_blocked_fraction(0) - b) < 0.005


def test_run_is_deterministic():
    p = Params(3, 7, 0.4)
    a = run(p, 5000, seed=9, burnin=100, replicas=2)
    b = run(p, 5000, seed=9, burnin=100, replicas=2)
    assert a == b
    c = run(p, 5000, seed=10, burnin=100, replicas=2)
    assert c.occupancy != a.occupancy


def test_replicas_independent_of_processes():
    p = Params(2, 5, 0.5)
    seq = run(p, 3000, seed=1, burnin=10, replicas=3)
    par = run(p, 3000, seed=1, burnin=10, replicas=3, processes=2)
    assert seq == par


def test_merge_is_associative():
    p = Params(2, 5, 0.5)
    parts = [run(p, 1000, seed=1, burnin=0, start=State((1, 4))) for _ in range(3)]
    assert parts[0].merge(parts[1]).merge(parts[2]) == parts[0].merge(parts[1].merge(parts[2]))
    with pytest.raises(errors.DomainError):
        parts[0].merge(run(Params(2, 5, 0.4), 1000, seed=1, burnin=0))


def test_stats_fields():
    stats = run(Params(3, 7, 0.5), 2000, seed=3, burnin=10, f_cap=2)
    assert sum(stats.occupancy) == stats.steps
    assert 0 <= stats.blocked_fraction <= 1 and 0 <= stats.exhausted_fraction <= 1
    assert stats.exhausted_fraction > 0
    doc = stats.to_json()
    for key in ("params", "seed", "steps", "burnin", "f_cap", "per_worker_blocked",
                "blocked_fraction", "exhausted_fraction", "occupancy"):
        assert key in doc
    assert stats.parts_collected == 3 * stats.steps - sum(stats.per_worker_blocked) - sum(stats.per_worker_exhausted)


def test_no_exhaustion_without_cap():
    stats = run(Params(3, 7, 0.1), 5000, seed=3, burnin=10)
    assert stats.exhausted_fraction == 0


def test_empirical_distribution():
    stats = run(Params(3, 7, 0.5), 3000, seed=5, burnin=10)
    dist = empirical_state_distribution(stats)
    assert dist.sum() == pytest.approx(1.0)
    assert empirical_state_distribution(run(Params(1, 4, 0.5), 10, seed=0, burnin=0)).tolist() == [1.0]
    empty = SimulationStats(2, 3, 0.5, 0, 1, 0, None, 1, [0, 0], [0, 0], 0, [0, 0, 0, 0])
    with pytest.raises(errors.DomainError):
        empirical_state_distribution(empty)
    no_occ = run(Params(2, 3, 0.5), 10, seed=0, burnin=0, track_occupancy=False)
    with pytest.raises(errors.DomainError):
        empirical_state_distribution(no_occ)


def test_trace_output():
    buf = io.StringIO()
    stats = run(Params(2, 3, 0.5), 50, seed=2, burnin=5, trace=buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "replica,step,state_index,blocked_mask"
    assert len(lines) == 51
    idx = [int(l.split(",")[2]) for l in lines[1:]]
    assert np.bincount(idx, minlength=4).tolist() == stats.occupancy


def test_one_step_frequencies_small():
    params = Params(2, 3, 0.5)
    tm = build_transition_matrix(2, 3, 0.5)
    for i, st in enumerate(tm.states):
        f = one_step_frequencies(params, st, 20000, seed=i)
        assert abs(f.sum() - 1) < 1e-12
        assert np.abs(f - tm.p[i]).sum() <= 0.05


def test_one_step_frequencies_three_workers():
    params = Params(3, 7, 0.5)
    tm = build_transition_matrix(3, 7, 0.5)
    for i in (0, 5, 17):
        f = one_step_frequencies(params, tm.states[i], 10**5, seed=i)
        assert np.abs(f - tm.p[i]).sum() <= 0.02


def test_run_domain_errors():
    p = Params(2, 3, 0.5)
    with pytest.raises(errors.DomainError):
        run(p, 0, seed=0)
    with pytest.raises(errors.DomainError):
        run(p, 10, seed=0, burnin=-1)
    with pytest.raises(errors.DomainError):
        run(p, 10, seed=0, f_cap=0)
    with pytest.raises(errors.DomainError):
        run(p, 10, seed=0, start=State((1, 3)))


def test_moderate_run_matches_stationary():
    stats = run(Params(2, 3, 0.5), 2 * 10**5, seed=8, burnin=1000)
    nu = closed_form_stationary(2, 3, 0.5).nu
    assert np.abs(empirical_state_distribution(stats) - nu).sum() <= 0.02
