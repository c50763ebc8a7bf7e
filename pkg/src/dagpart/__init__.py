"""Solvers for DAG partitioning: delete a minimum-weight arc set so that every
weakly connected component of a DAG keeps exactly one sink."""

from .estimators import (
    BruteForcePartitioner,
    DataReducer,
    ExactPartitioner,
    HeuristicPartitioner,
    TreewidthPartitioner,
    component_labels,
)
from .graph import (
    NotADagError,
    PartitioningSet,
    WeightedDag,
    is_valid_partitioning_set,
    minimalize,
    reaches_exactly_one_sink,
    reverse_topological_order,
    sinks,
    weak_components,
)
from .heuristic import heuristic_partition
from .reduction import compute_sink_labels, lift_witness, reduce
from .search import Mode, SearchConfig, Status, solve_decision, solve_minimize
from .treewidth import TreeDecomposition, solve_treewidth

__version__ = "0.1.0"

__all__ = [
    "BruteForcePartitioner",
    "DataReducer",
    "ExactPartitioner",
    "HeuristicPartitioner",
    "TreewidthPartitioner",
    "component_labels",
    "NotADagError",
    "PartitioningSet",
    "WeightedDag",
    "is_valid_partitioning_set",
    "minimalize",
    "reaches_exactly_one_sink",
    "reverse_topological_order",
    "sinks",
    "weak_components",
    "heuristic_partition",
    "compute_sink_labels",
    "lift_witness",
    "reduce",
    "Mode",
    "SearchConfig",
    "Status",
    "solve_decision",
    "solve_minimize",
    "TreeDecomposition",
    "solve_treewidth",
]
