"""scikit-learn style front end.

Every partitioner is a clusterer over the vertices of one graph: ``fit(X)``
solves the instance given as ``X`` and ``labels_[v]`` is the sink whose
component ``v`` ends up in.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin

from .graph import PartitioningSet, WeightedDag
from .heuristic import heuristic_partition
from .oracle import MAX_BRUTE_ARCS, brute_force_min
from .reduction import compute_sink_labels, lift_witness, reduce
from .search import Mode, SearchConfig, solve_decision, solve_minimize
from .treewidth import (
    DEFAULT_MAX_WIDTH,
    forest_decomposition,
    heuristic_decomposition,
    solve_treewidth,
)
from .validation import check_budget, check_dag

__all__ = [
    "component_labels",
    "ExactPartitioner",
    "HeuristicPartitioner",
    "TreewidthPartitioner",
    "BruteForcePartitioner",
    "DataReducer",
]


def component_labels(g: WeightedDag, s: PartitioningSet) -> list[int]:
    """The sink each vertex reaches once ``s`` is deleted (``s`` must be valid)."""
    labels = compute_sink_labels(g.subgraph_without(s.arcs)).labels
    if min(labels, default=0) < 0:
        raise ValueError("not a valid partitioning set")
    return list(labels)


class _Partitioner(ClusterMixin, BaseEstimator):
    def _finish(self, g, status, s, stats=None):
        self.n_vertices_ = g.n
        self.status_ = status
        self.partitioning_set_ = s
        self.weight_ = None if s is None else s.total_weight
        self.labels_ = None if s is None else component_labels(g, s)
        self.stats_ = stats
        return self

    def fit_predict(self, X, y=None):
        self.fit(X)
        if self.labels_ is None:
            raise RuntimeError(f"no partitioning set found (status {self.status_})")
        return self.labels_


class ExactPartitioner(_Partitioner):
    """Search-tree solver.

    With ``budget=None`` the minimum is computed; otherwise the decision
    question "weight <= budget?" is answered and ``status_`` is one of
    ``"yes"``, ``"no"`` or ``"limit"``.
    """

    def __init__(self, reduction="interleaved", budget=None, node_limit=None, timeout=None, interleave_stride=1):
        self.reduction = reduction
        self.budget = budget
        self.node_limit = node_limit
        self.timeout = timeout
        self.interleave_stride = interleave_stride

    def fit(self, X, y=None):
        g = check_dag(X)
        k = check_budget(self.budget)
        mode = Mode(self.reduction)
        if k is None:
            res = solve_minimize(g, mode, self.node_limit, self.timeout, self.interleave_stride)
        else:
            cfg = SearchConfig(mode, k, self.node_limit, self.timeout, True, self.interleave_stride)
            res = solve_decision(g, cfg)
        return self._finish(g, res.status.value, res.witness, res.stats)


class HeuristicPartitioner(_Partitioner):
    """Greedy single-pass labelling; always returns a valid set."""

    def __init__(self, pre_reduce=False):
        self.pre_reduce = pre_reduce

    def fit(self, X, y=None):
        g = check_dag(X)
        return self._finish(g, "yes", heuristic_partition(g, self.pre_reduce))


class TreewidthPartitioner(_Partitioner):
    """Tree-decomposition DP.

    ``decomposition`` may be a :class:`TreeDecomposition`; when omitted a
    forest gets its width-1 decomposition and other graphs a min-degree one.
    """

    def __init__(self, decomposition=None, max_width=DEFAULT_MAX_WIDTH):
        self.decomposition = decomposition
        self.max_width = max_width

    def fit(self, X, y=None):
        g = check_dag(X)
        td = self.decomposition
        if td is None:
            try:
                td = forest_decomposition(g)
            except ValueError:
                td = heuristic_decomposition(g)
        res = solve_treewidth(g, td, max_width=self.max_width, witness=True)
        self.width_ = res.width
        return self._finish(g, "yes", res.witness)


class BruteForcePartitioner(_Partitioner):
    """Exhaustive search; only for tiny graphs."""

    def __init__(self, max_arcs=MAX_BRUTE_ARCS):
        self.max_arcs = max_arcs

    def fit(self, X, y=None):
        g = check_dag(X)
        _, s = brute_force_min(g, self.max_arcs)
        return self._finish(g, "yes", s)


class DataReducer(TransformerMixin, BaseEstimator):
    """Exhaustive data reduction as a transformer.

    ``fit`` records the reduction of ``X``; ``transform`` returns the reduced
    graph and ``lift`` maps solutions of it back to ``X``.
    """

    def fit(self, X, y=None):
        g = check_dag(X)
        self.reduced_, self.log_ = reduce(g)
        self.n_vertices_ = g.n
        return self

    def transform(self, X):
        g = check_dag(X)
        if not hasattr(self, "log_"):
            raise RuntimeError("DataReducer is not fitted")
        if g == self.log_.source:
            return self.reduced_
        return reduce(g)[0]

    def lift(self, s) -> PartitioningSet:
        return lift_witness(self.log_, s)
