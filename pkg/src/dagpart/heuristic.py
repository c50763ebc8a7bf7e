"""Greedy labelling heuristic: keep the sink that is costliest to cut off."""

from __future__ import annotations

from .graph import PartitioningSet, WeightedDag
from .reduction import lift_witness, reduce

__all__ = ["heuristic_partition", "heuristic_labels"]


def heuristic_labels(g: WeightedDag) -> tuple[list[int], list[int]]:
    """One reverse-topological pass; returns ``(labels, deleted arc ids)``.

    Each non-sink groups its out-arcs by the label of their head and keeps
    the group of largest total weight (ties: smallest sink id); arcs of all
    other groups are deleted.
    """
    n = g.n
    L = [-1] * n
    ptr, out = g.adjacency()
    heads, weights = g.heads, g.weights
    deleted = []
    for v in g._order:
        lo, hi = ptr[v], ptr[v + 1]
        if lo == hi:
            L[v] = v
            continue
        first = L[heads[out[lo]]]
        for j in range(lo + 1, hi):
            if L[heads[out[j]]] != first:
                break
        else:
            L[v] = first
            continue
        mass: dict = {}
        for j in range(lo, hi):
            a = out[j]
            s = L[heads[a]]
            mass[s] = mass.get(s, 0) + weights[a]
        best = min(mass, key=lambda s: (-mass[s], s))
        L[v] = best
        for j in range(lo, hi):
            a = out[j]
            if L[heads[a]] != best:
                deleted.append(a)
    return L, deleted


def heuristic_partition(g: WeightedDag, pre_reduce: bool = False) -> PartitioningSet:
    """Valid partitioning set from the greedy pass, optionally on the reduced graph."""
    if pre_reduce:
        r, log = reduce(g)
        _, deleted = heuristic_labels(r)
        return lift_witness(log, deleted)
    _, deleted = heuristic_labels(g)
    return PartitioningSet.of(g, deleted)
