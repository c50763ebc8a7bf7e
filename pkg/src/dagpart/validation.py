"""Input coercion helpers for the estimator layer."""

from __future__ import annotations

from numbers import Integral

from .graph import WeightedDag

__all__ = ["check_dag", "check_budget"]


def check_dag(X, n_vertices: int | None = None) -> WeightedDag:
    """Coerce ``X`` into a :class:`WeightedDag`.

    Accepts a ``WeightedDag``, a networkx ``DiGraph`` whose nodes are
    ``0..n-1`` (arc weights read from the ``weight`` attribute, default 1), or
    a sequence of ``(u, v)`` / ``(u, v, w)`` tuples.  For tuples the vertex
    count is ``n_vertices`` or one more than the largest endpoint.
    """
    if isinstance(X, WeightedDag):
        if n_vertices is not None and n_vertices != X.n:
            raise ValueError(f"graph has {X.n} vertices, expected {n_vertices}")
        return X
    if hasattr(X, "is_directed") and hasattr(X, "edges"):
        if not X.is_directed():
            raise TypeError("an undirected graph is not a DAG instance")
        n = X.number_of_nodes()
        if set(X.nodes) != set(range(n)):
            raise ValueError("networkx graphs must use nodes 0..n-1")
        arcs, ws = [], []
        for u, v, data in X.edges(data=True):
            arcs.append((u, v))
            ws.append(data.get("weight", 1))
        return WeightedDag(n, arcs, ws)
    try:
        rows = [tuple(r) for r in X]
    except TypeError:
        raise TypeError(f"cannot interpret {type(X).__name__} as a DAG") from None
    arcs, ws = [], []
    for r in rows:
        if len(r) not in (2, 3):
            raise ValueError(f"arc tuples need 2 or 3 entries, got {r!r}")
        arcs.append((int(r[0]), int(r[1])))
        ws.append(int(r[2]) if len(r) == 3 else 1)
    n = n_vertices
    if n is None:
        n = 1 + max((max(a) for a in arcs), default=-1)
    return WeightedDag(n, arcs, ws)


def check_budget(k) -> int | None:
    if k is None:
        return None
    if isinstance(k, bool) or not isinstance(k, Integral):
        raise TypeError("budget must be an integer")
    if k < 0:
        raise ValueError("budget must be >= 0")
    return int(k)
