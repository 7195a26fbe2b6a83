"""Minimum control sets for majority dynamics on graphs.

Find the smallest set of nodes which, pinned to action 1, drags an
entire network from all-zeros to all-ones under asynchronous
best-response updates.  Validity of a candidate set is decided in
linear time by contagion closure; small sets are found by a reversible
randomized search chain; exact brute-force oracles cover small graphs
so everything can be cross-checked.
"""

from .cascade import (
    activatable,
    activation_order,
    closure,
    is_absorbing_state,
    is_minimal,
    is_reachable_state,
    is_valid,
    normalize_control_set,
    trim_to_minimal,
    verify_activation_order,
)
from .chain import (
    ChainParams,
    ChainState,
    OccupancyResult,
    RunRecord,
    best_response_step,
    derive_run_seed,
    empirical_sufficiency,
    feasible_moves,
    jump_move_distribution,
    run_controlled,
    run_occupancy,
    run_search,
    search_step_jump,
    search_step_plain,
)
from .errors import ChainStuckError, InternalInvariantError, VerificationFailure
from .game import (
    BestResponse,
    Configuration,
    NeighborCount,
    all_ones,
    all_zeros,
    best_response,
    enumerate_nash_minority,
    from_support,
    is_nash_majority,
    is_nash_minority,
    neighbor_counts,
    potential_delta_check,
    potential_majority,
    potential_minority,
    utility_majority,
    utility_minority,
)
from .graph import (
    Graph,
    audit,
    gen_clique,
    gen_cycle,
    gen_double_star,
    gen_erdos_renyi,
    gen_path,
    gen_random_tree,
    gen_star,
    graph_from_spec,
    read_edge_list,
    write_edge_list,
)
from .oracle import (
    ReachableStates,
    TransitionMatrix,
    build_transition_matrix,
    check_detailed_balance,
    check_minority_nash_validity,
    enumerate_minimal_sets,
    enumerate_reachable,
    exhaustive_optimum,
    oracle_report,
    stationary_distribution,
)
from .search import ControlSetSearch, check_graph

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graph
    "Graph",
    "audit",
    "gen_clique",
    "gen_path",
    "gen_cycle",
    "gen_star",
    "gen_double_star",
    "gen_erdos_renyi",
    "gen_random_tree",
    "graph_from_spec",
    "read_edge_list",
    "write_edge_list",
    # game
    "Configuration",
    "NeighborCount",
    "BestResponse",
    "all_zeros",
    "all_ones",
    "from_support",
    "neighbor_counts",
    "utility_majority",
    "utility_minority",
    "potential_majority",
    "potential_minority",
    "best_response",
    "is_nash_majority",
    "is_nash_minority",
    "enumerate_nash_minority",
    "potential_delta_check",
    # cascade
    "normalize_control_set",
    "activatable",
    "closure",
    "activation_order",
    "verify_activation_order",
    "is_valid",
    "is_minimal",
    "trim_to_minimal",
    "is_reachable_state",
    "is_absorbing_state",
    # chain
    "ChainParams",
    "ChainState",
    "RunRecord",
    "OccupancyResult",
    "feasible_moves",
    "jump_move_distribution",
    "search_step_plain",
    "search_step_jump",
    "run_search",
    "best_response_step",
    "run_controlled",
    "empirical_sufficiency",
    "run_occupancy",
    "derive_run_seed",
    # oracle
    "ReachableStates",
    "TransitionMatrix",
    "exhaustive_optimum",
    "enumerate_reachable",
    "build_transition_matrix",
    "stationary_distribution",
    "check_detailed_balance",
    "enumerate_minimal_sets",
    "check_minority_nash_validity",
    "oracle_report",
    # search / errors
    "ControlSetSearch",
    "check_graph",
    "VerificationFailure",
    "InternalInvariantError",
    "ChainStuckError",
]
