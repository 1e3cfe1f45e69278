"""colmedian: close ell facilities at minimum total client distance.

Public surface: instance model and file formats, Voronoi cost accounting,
the (1+eps) approximation scheme, partition-hint families, the capacitated
assignment evaluator, exact enumeration oracles, and two structured
instance generators.
"""

from .capacitated import (
    TransportationProblem,
    build_transportation,
    closure_feasible,
    optimal_assignment,
)
from .epas import (
    GuessWindow,
    RequiredSet,
    SolveStats,
    SupportSet,
    compute_required_set,
    cost_bounds,
    epsilon_support,
    guess_windows,
    solve_epas,
    solve_epas_with_stats,
    solve_given_partition,
    trial_count,
)
from .errors import (
    BudgetError,
    ColmedianError,
    FormatError,
    InfeasibleError,
    MetricViolationError,
    ParameterError,
)
from .instance import (
    Instance,
    MetricViolation,
    Solution,
    format_solution,
    from_euclidean_points,
    parse_instance,
    serialize_instance,
    validate_metric,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .oracle import DEFAULT_SUBSET_BUDGET, exact_capacitated, exact_uncapacitated
from .partitions import (
    FamilyParams,
    Partition,
    deterministic_family,
    family_size_bound,
    sample_partition,
    support_bound_for,
    verify_family_coverage,
)
from .reductions import (
    CoverageInstance,
    Graph,
    coverage_reduction,
    extract_coverage_solution,
    graph_is_connected,
    independent_set_reduction,
    parse_coverage,
    parse_graph,
)
from .voronoi import (
    VoronoiDiagram,
    build_voronoi,
    delta,
    make_solution,
    rerouted_cost,
    solution_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "ColmedianError",
    "CoverageInstance",
    "DEFAULT_SUBSET_BUDGET",
    "FamilyParams",
    "FormatError",
    "Graph",
    "GuessWindow",
    "InfeasibleError",
    "Instance",
    "KERNEL_BACKEND",
    "MetricViolation",
    "MetricViolationError",
    "ParameterError",
    "Partition",
    "RequiredSet",
    "Solution",
    "SolveStats",
    "SupportSet",
    "TransportationProblem",
    "VoronoiDiagram",
    "build_transportation",
    "build_voronoi",
    "closure_feasible",
    "compute_required_set",
    "cost_bounds",
    "coverage_reduction",
    "delta",
    "deterministic_family",
    "epsilon_support",
    "exact_capacitated",
    "exact_uncapacitated",
    "extract_coverage_solution",
    "family_size_bound",
    "format_solution",
    "from_euclidean_points",
    "graph_is_connected",
    "guess_windows",
    "independent_set_reduction",
    "make_solution",
    "optimal_assignment",
    "parse_coverage",
    "parse_graph",
    "parse_instance",
    "rerouted_cost",
    "sample_partition",
    "serialize_instance",
    "solution_cost",
    "solve_epas",
    "solve_epas_with_stats",
    "solve_given_partition",
    "support_bound_for",
    "trial_count",
    "validate_metric",
    "verify_family_coverage",
]
