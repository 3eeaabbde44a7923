"""Max-sum diversification by local search under matroid constraints."""

__version__ = "0.1.0"

from .dispersion import OpCounter, SearchState, apply_swap, cross_sum, dispersion, make_state, swap_value
from .distance import (DistanceMatrix, InputError, PointSet, build_distance_matrix, load_matrix,
                       load_points_csv, verify_negative_type)
from .local_search_intersection import (enumerate_exchange_sets, intersection_bound, intersection_local_search,
                                        ptas_schedule)
from .local_search_matroid import RunTrace, default_iterations, greedy_baseline, initial_basis, local_search
from .matroid import (ExplicitMatroid, IntersectionConstraint, PartitionMatroid, UniformMatroid,
                      augment_to_maximal, brualdi_bijection, is_basis, max_common_independent)
from .oracle import brute_force_combined, brute_force_intersection, brute_force_msd
from .submodular import (CoverageFn, ExplicitFn, LinearFn, combined_local_search, curvature, decompose)

__all__ = [
    "CoverageFn",
    "DistanceMatrix",
    "ExplicitFn",
    "ExplicitMatroid",
    "InputError",
    "IntersectionConstraint",
    "LinearFn",
    "OpCounter",
    "PartitionMatroid",
    "PointSet",
    "RunTrace",
    "SearchState",
    "UniformMatroid",
    "apply_swap",
    "augment_to_maximal",
    "brualdi_bijection",
    "brute_force_combined",
    "brute_force_intersection",
    "brute_force_msd",
    "build_distance_matrix",
    "combined_local_search",
    "cross_sum",
    "curvature",
    "decompose",
    "default_iterations",
    "dispersion",
    "enumerate_exchange_sets",
    "greedy_baseline",
    "initial_basis",
    "intersection_bound",
    "intersection_local_search",
    "is_basis",
    "load_matrix",
    "load_points_csv",
    "local_search",
    "make_state",
    "max_common_independent",
    "ptas_schedule",
    "swap_value",
    "verify_negative_type",
]
