"""Editing graphs into a fixed number of stars, bicliques or t-partite cliques."""

from .bicluster import AnnotatedInstance, abe_cost, solve_annotated, solve_p_bicluster, solve_t_partite
from .graph import (
    ClusterSolution,
    EditSet,
    Graph,
    ProblemSpec,
    SolveResult,
    Variant,
    apply_edits,
    find_obstruction,
    forced_edits,
    is_valid_solution,
    read_graph,
    recognize,
    write_graph,
)
from .kernel import kernelize
from .oracle import oracle_optimum, oracle_partition
from .starforest import solve_p_starforest

__all__ = [
    "AnnotatedInstance", "ClusterSolution", "EditSet", "Graph", "ProblemSpec", "SolveResult",
    "Variant", "abe_cost", "apply_edits", "find_obstruction", "forced_edits", "is_valid_solution",
    "kernelize", "oracle_optimum", "oracle_partition", "read_graph", "recognize",
    "solve_annotated", "solve_p_bicluster", "solve_p_starforest", "solve_t_partite", "write_graph",
]
