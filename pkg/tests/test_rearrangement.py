import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringwalk import errors
from ringwalk.rearrangement import (
    apply_generators,
    canonical_beta,
    costate,
    delta_vector,
    displacement,
    gamma,
    phi,
)
from ringwalk.state_space import State, enumerate_states

from oracles import alpha_solutions, matvec_generators


def zero_sum_vectors(max_k=8, bound=20):
    return st.lists(st.integers(-bound, bound), min_size=1, max_size=max_k - 1).map(
        lambda xs: tuple(xs) + (-sum(xs),)
    ).filter(lambda d: abs(d[-1]) <= bound)


def test_delta_vector():
    assert delta_vector(3, 6) == (0, 0, 1, -1, 0, 0)
    assert delta_vector(3, 4) == (0, 0, 1, -1)
    assert delta_vector(2, 6)[::-1] == (0, 0, 0, -1, 1, 0)
    assert delta_vector(2, 6)[::-1] == tuple(-x for x in delta_vector(4, 6))
    assert delta_vector(5, 5) == (-1, 0, 0, 0, 1)
    assert delta_vector(1, 1) == (0,)
    with pytest.raises(errors.DomainError):
        delta_vector(0, 3)
    with pytest.raises(errors.DomainError):
        delta_vector(4, 3)


def test_reversal_identity():
    for k in range(2, 13):
        for i in range(1, k):
            assert delta_vector(i, k)[::-1] == tuple(-x for x in delta_vector(k - i, k))


def test_displacement():
    x = State((2, 1, 4, 4, 1))
    y = State((3, 1, 2, 2, 4))
    assert displacement(x, y) == (1, 0, -2, -2, 3)
    assert displacement(x, x) == (0,) * 5
    assert displacement(State((1, 2), 1), State((2, 1))) == (1, -1)
    with pytest.raises(errors.InvalidStateError):
        displacement(State((1, 2)), State((1, 3)))


def test_worked_example_decomposition():
    d = (1, 0, -2, -2, 3)
    assert gamma(d) == (1, 1, -1, -3, 0)
    assert canonical_beta(d).beta == (4, 4, 2, 0, 3)
    assert phi(d) == 13


def test_small_cases():
    assert gamma((0, 0, 0)) == (0, 0, 0)
    assert gamma((1, -1, 0)) == (1, 0, 0)
    assert canonical_beta((0, 0, 0)).beta == (0, 0, 0)
    assert canonical_beta((1, -1, 0)).beta == (1, 0, 0)
    assert alpha_solutions((1, -1, 0)) == [(1, 0, 0)]
    assert phi((0, 0)) == 0
    for k in range(1, 9):
        for i in range(1, k + 1):
            d = delta_vector(i, k)
            assert phi(d) == (1 if k > 1 else 0)


def test_invalid_displacement():
    for f in (gamma, canonical_beta, phi):
        with pytest.raises(errors.DomainError):
            f((1, 0, 0))


@settings(max_examples=400, deadline=None)
@given(zero_sum_vectors())
def test_beta_is_the_unique_solution(d):
    beta = canonical_beta(d).beta
    assert min(beta) == 0
    assert matvec_generators(beta) == d
    assert apply_generators(beta) == d
    assert alpha_solutions(d) == [beta]


@settings(max_examples=300, deadline=None)
@given(zero_sum_vectors())
def test_phi_zero_iff_zero(d):
    assert (phi(d) == 0) == (not any(d))
    assert phi(d) == canonical_beta(d).length
    # any other non-negative path is longer by a multiple of k
    for extra in range(1, 4):
        alt = tuple(b + extra for b in canonical_beta(d).beta)
        assert matvec_generators(alt) == d
        assert sum(alt) == phi(d) + extra * len(d)


def test_costate():
    assert costate(State((2, 1, 4))) == State((4, 1, 2))
    assert costate(State((2, 3, 2))) == State((2, 3, 2))
    assert costate(State.parse("1*,2,4")) == State.parse("4,2,1*")
    for s in enumerate_states(4, 9):
        c = costate(s)
        assert costate(c) == s
        assert c.num_blocked == s.num_blocked
