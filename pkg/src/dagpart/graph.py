"""Weighted DAG representation and the structural checks every solver shares."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "NotADagError",
    "WeightedDag",
    "PartitioningSet",
    "reverse_topological_order",
    "sinks",
    "weak_components",
    "is_valid_partitioning_set",
    "reaches_exactly_one_sink",
    "minimalize",
]

MAX_WEIGHT = 2**63 - 1


class NotADagError(ValueError):
    pass


def _csr(keys: np.ndarray, n: int) -> tuple[list[int], list[int]]:
    order = np.argsort(keys, kind="stable")
    counts = np.bincount(keys, minlength=n)
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr.tolist(), order.tolist()


class WeightedDag:
    """Simple directed acyclic graph with positive integer arc weights.

    Vertices are ``0..n-1``; arc ``i`` is ``(tails[i], heads[i])`` with weight
    ``weights[i]``.  Instances are immutable; acyclicity is checked on
    construction and the reverse topological order is cached.
    """

    __slots__ = (
        "n", "tails", "heads", "weights",
        "_out_ptr", "_out_arcs", "_in_ptr", "_in_arcs", "_order", "_arc_index",
    )

    def __init__(
        self,
        n: int,
        arcs: Iterable[tuple[int, int]],
        weights: Iterable[int] | None = None,
        *,
        check_duplicates: bool = True,
    ):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        arcs = list(arcs)
        tails = [int(a[0]) for a in arcs]
        heads = [int(a[1]) for a in arcs]
        if weights is None:
            ws = [1] * len(arcs)
        else:
            ws = [int(w) for w in weights]
            if len(ws) != len(arcs):
                raise ValueError("one weight per arc required")
        m = len(arcs)
        if m:
            t = np.asarray(tails, dtype=np.int64)
            h = np.asarray(heads, dtype=np.int64)
            if t.min() < 0 or h.min() < 0 or t.max() >= n or h.max() >= n:
                raise ValueError("arc endpoint out of range")
            if np.any(t == h):
                i = int(np.flatnonzero(t == h)[0])
                raise ValueError(f"self-loop at vertex {tails[i]}")
            if min(ws) < 1:
                raise ValueError("arc weights must be >= 1")
            if sum(ws) > MAX_WEIGHT:
                raise OverflowError("total arc weight exceeds 64-bit range")
            if check_duplicates:
                keys = t * n + h
                if np.unique(keys).size != m:
                    raise ValueError("duplicate arc")
        else:
            t = h = np.zeros(0, dtype=np.int64)
        self.n = n
        self.tails = tuple(tails)
        self.heads = tuple(heads)
        self.weights = tuple(ws)
        self._out_ptr, self._out_arcs = _csr(t, n)
        self._in_ptr, self._in_arcs = _csr(h, n)
        self._arc_index = None
        self._order = self._kahn()

    @classmethod
    def from_arcs(cls, n: int, weighted_arcs: Iterable[Sequence[int]]) -> "WeightedDag":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples."""
        arcs, ws = [], []
        for a in weighted_arcs:
            arcs.append((a[0], a[1]))
            ws.append(a[2] if len(a) > 2 else 1)
        return cls(n, arcs, ws)

    def _kahn(self) -> list[int]:
        # Kahn's method run from the sinks; the smallest ready id goes first.
        outdeg = [self._out_ptr[v + 1] - self._out_ptr[v] for v in range(self.n)]
        heap = [v for v in range(self.n) if outdeg[v] == 0]
        heapq.heapify(heap)
        order = []
        in_ptr, in_arcs, tails = self._in_ptr, self._in_arcs, self.tails
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for j in range(in_ptr[v], in_ptr[v + 1]):
                u = tails[in_arcs[j]]
                outdeg[u] -= 1
                if outdeg[u] == 0:
                    heapq.heappush(heap, u)
        if len(order) != self.n:
            raise NotADagError("not a DAG: the arc relation contains a cycle")
        return order

    @property
    def m(self) -> int:
        return len(self.tails)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return list(zip(self.tails, self.heads))

    def out_arcs(self, v: int) -> list[int]:
        return self._out_arcs[self._out_ptr[v]:self._out_ptr[v + 1]]

    def in_arcs(self, v: int) -> list[int]:
        return self._in_arcs[self._in_ptr[v]:self._in_ptr[v + 1]]

    def successors(self, v: int) -> list[int]:
        return [self.heads[a] for a in self.out_arcs(v)]

    def predecessors(self, v: int) -> list[int]:
        return [self.tails[a] for a in self.in_arcs(v)]

    def out_degree(self, v: int) -> int:
        return self._out_ptr[v + 1] - self._out_ptr[v]

    def in_degree(self, v: int) -> int:
        return self._in_ptr[v + 1] - self._in_ptr[v]

    def adjacency(self) -> tuple[list[int], list[int]]:
        """CSR out-adjacency ``(ptr, arc_ids)`` for hot loops."""
        return self._out_ptr, self._out_arcs

    def arc_id(self, u: int, v: int) -> int | None:
        if self._arc_index is None:
            self._arc_index = {(t, h): i for i, (t, h) in enumerate(zip(self.tails, self.heads))}
        return self._arc_index.get((u, v))

    def weight_of(self, arc_ids: Iterable[int]) -> int:
        w = self.weights
        return sum(w[a] for a in arc_ids)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def subgraph_without(self, deleted: Iterable[int]) -> "WeightedDag":
        """The graph with the given arcs removed (vertex ids unchanged)."""
        drop = set(deleted)
        keep = [i for i in range(self.m) if i not in drop]
        return WeightedDag(
            self.n,
            [(self.tails[i], self.heads[i]) for i in keep],
            [self.weights[i] for i in keep],
            check_duplicates=False,
        )

    def same_structure(self, other: "WeightedDag") -> bool:
        """Same vertex count and the same weighted arc multiset."""
        if self.n != other.n or self.m != other.m:
            return False
        mine = sorted(zip(self.tails, self.heads, self.weights))
        theirs = sorted(zip(other.tails, other.heads, other.weights))
        return mine == theirs

    def __eq__(self, other):
        if not isinstance(other, WeightedDag):
            return NotImplemented
        return (
            self.n == other.n
            and self.tails == other.tails
            and self.heads == other.heads
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.n, self.tails, self.heads, self.weights))

    def __repr__(self):
        return f"WeightedDag(n={self.n}, m={self.m})"

    def __getstate__(self):
        return (self.n, self.tails, self.heads, self.weights)

    def __setstate__(self, state):
        n, tails, heads, weights = state
        self.__init__(n, list(zip(tails, heads)), weights, check_duplicates=False)


@dataclass(frozen=True)
class PartitioningSet:
    """A set of arc ids together with its total weight."""

    arcs: frozenset
    total_weight: int

    @classmethod
    def of(cls, g: WeightedDag, arc_ids: Iterable[int]) -> "PartitioningSet":
        ids = frozenset(arc_ids)
        for a in ids:
            if not 0 <= a < g.m:
                raise ValueError(f"unknown arc id {a}")
        return cls(ids, g.weight_of(ids))

    @classmethod
    def empty(cls) -> "PartitioningSet":
        return cls(frozenset(), 0)

    def __len__(self):
        return len(self.arcs)

    def __iter__(self):
        return iter(sorted(self.arcs))

    def __contains__(self, arc_id):
        return arc_id in self.arcs

    def consistent_with(self, g: WeightedDag) -> bool:
        return all(0 <= a < g.m for a in self.arcs) and g.weight_of(self.arcs) == self.total_weight

    def as_pairs(self, g: WeightedDag) -> list[tuple[int, int]]:
        return [(g.tails[a], g.heads[a]) for a in sorted(self.arcs)]


def _arc_set(g: WeightedDag, s) -> frozenset:
    ids = s.arcs if isinstance(s, PartitioningSet) else frozenset(s)
    for a in ids:
        if not 0 <= a < g.m:
            raise ValueError(f"unknown arc id {a}")
    return ids


def reverse_topological_order(g: WeightedDag) -> list[int]:
    """Vertices with every head before its tail; ties go to the smaller id."""
    return list(g._order)


def sinks(g: WeightedDag) -> set[int]:
    return {v for v in range(g.n) if g.out_degree(v) == 0}


def weak_components(g: WeightedDag, deleted=()) -> list[set[int]]:
    """Weakly connected components of ``g`` minus the ``deleted`` arcs.

    Components are returned ordered by their smallest vertex.
    """
    drop = _arc_set(g, deleted)
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (u, v) in enumerate(zip(g.tails, g.heads)):
        if i in drop:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            if ru < rv:
                parent[rv] = ru
            else:
                parent[ru] = rv
    groups: dict[int, set[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), set()).add(v)
    return [groups[r] for r in sorted(groups)]


def is_valid_partitioning_set(g: WeightedDag, s) -> bool:
    """True iff every weak component of ``g`` minus ``s`` has exactly one sink."""
    drop = _arc_set(g, s)
    outdeg = [g.out_degree(v) for v in range(g.n)]
    for a in drop:
        outdeg[g.tails[a]] -= 1
    for comp in weak_components(g, drop):
        if sum(1 for v in comp if outdeg[v] == 0) != 1:
            return False
    return True


def reaches_exactly_one_sink(g: WeightedDag, s) -> bool:
    """True iff every vertex of ``g`` minus ``s`` reaches exactly one sink."""
    drop = _arc_set(g, s)
    reach: list[frozenset | None] = [None] * g.n
    for v in g._order:
        targets = [g.heads[a] for a in g.out_arcs(v) if a not in drop]
        if not targets:
            reach[v] = frozenset((v,))
        else:
            acc = set()
            for w in targets:
                acc |= reach[w]
            reach[v] = frozenset(acc)
        if len(reach[v]) != 1:
            return False
    return True


def minimalize(g: WeightedDag, s) -> PartitioningSet:
    """Drop arcs from a valid partitioning set while it stays valid.

    Arcs are tried in ascending id order; the result is inclusion-minimal.
    """
    current = set(_arc_set(g, s))
    if not is_valid_partitioning_set(g, current):
        raise ValueError("not a valid partitioning set")
    changed = True
    while changed:
        changed = False
        for a in sorted(current):
            current.discard(a)
            if is_valid_partitioning_set(g, current):
                changed = True
            else:
                current.add(a)
    return PartitioningSet.of(g, current)
