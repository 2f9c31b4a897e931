"""Exact analysis of k workers circulating without passing on an n-bin ring."""

from .errors import (
    ConvergenceError,
    DomainError,
    InvalidStateError,
    RingWalkError,
    StateSpaceTooLarge,
)
from .state_space import (
    Params,
    State,
    count_configurations,
    count_states_with_blockages,
    count_total_states,
    enumerate_states,
    rank,
    unrank,
    validate_state,
)
from .rearrangement import canonical_beta, costate, delta_vector, displacement, gamma, phi
from .digraph import bfs_distance, build_digraph, check_self_converse
from .markov import (
    blockage_fraction_closed_form,
    blockage_fraction_from_distribution,
    build_transition_matrix,
    closed_form_stationary,
    power_iteration_stationary,
    transition_probability,
)
from .simulator import configuration_of_positions, empirical_state_distribution, run, step

__all__ = [
    "ConvergenceError",
    "DomainError",
    "InvalidStateError",
    "RingWalkError",
    "StateSpaceTooLarge",
    "Params",
    "State",
    "count_configurations",
    "count_states_with_blockages",
    "count_total_states",
    "enumerate_states",
    "rank",
    "unrank",
    "validate_state",
    "canonical_beta",
    "costate",
    "delta_vector",
    "displacement",
    "gamma",
    "phi",
    "bfs_distance",
    "build_digraph",
    "check_self_converse",
    "blockage_fraction_closed_form",
    "blockage_fraction_from_distribution",
    "build_transition_matrix",
    "closed_form_stationary",
    "power_iteration_stationary",
    "transition_probability",
    "configuration_of_positions",
    "empirical_state_distribution",
    "run",
    "step",
]

__version__ = "0.1.0"
