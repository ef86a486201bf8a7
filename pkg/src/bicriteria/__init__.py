"""Bicriteria network design: diameter-bounded Steiner trees, black-box
bicriteria transforms, and a series-parallel approximation scheme."""

from .dcst import DCSTResult, build_auxiliary_graph, dcst, dcst_solver, merge_phase
from .errors import (
    CapExceededError,
    CostOverflowError,
    GraphError,
    InfeasibleError,
    NotATreeError,
)
from .graph import (
    BiGraph,
    C,
    CostSelector,
    Criterion,
    D,
    Edge,
    TreeSolution,
    evaluate_tree,
    steiner_metrics,
    validate,
)
from .matching import MatchingResult, min_weight_matching
from .oracle import (
    enumerate_trees,
    exact_solver,
    matrix_tree_count,
    opt_given_budget,
    pareto_front,
)
from .paths import apsp, restricted_shortest_path_exact, restricted_shortest_path_fptas
from .spdp import (
    Verdict,
    dp_min_cost_given_diameter,
    dp_min_diameter_given_cost,
    fpas_dcst,
    parse_sp,
    test_procedure,
)
from .transforms import (
    BicriteriaSolver,
    Objective,
    UnicriterionSolver,
    bicriteria_equivalence,
    convert_sum,
    parametric_search,
)
from .trees import min_diameter_spanning_tree, mst

__version__ = "0.1.0"

__all__ = [
    "BiGraph",
    "BicriteriaSolver",
    "C",
    "CapExceededError",
    "CostOverflowError",
    "CostSelector",
    "Criterion",
    "D",
    "DCSTResult",
    "Edge",
    "GraphError",
    "InfeasibleError",
    "MatchingResult",
    "NotATreeError",
    "Objective",
    "TreeSolution",
    "UnicriterionSolver",
    "Verdict",
    "apsp",
    "bicriteria_equivalence",
    "build_auxiliary_graph",
    "convert_sum",
    "dcst",
    "dcst_solver",
    "dp_min_cost_given_diameter",
    "dp_min_diameter_given_cost",
    "enumerate_trees",
    "evaluate_tree",
    "exact_solver",
    "fpas_dcst",
    "matrix_tree_count",
    "merge_phase",
    "min_diameter_spanning_tree",
    "min_weight_matching",
    "mst",
    "opt_given_budget",
    "parametric_search",
    "pareto_front",
    "parse_sp",
    "restricted_shortest_path_exact",
    "restricted_shortest_path_fptas",
    "steiner_metrics",
    "test_procedure",
    "validate",
]
