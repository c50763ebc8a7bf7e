"""Seeded instance generators.

All randomness comes from :class:`random.Random` (Mersenne Twister) seeded
with the given integer, so outputs are reproducible within one Python
version.  Tests rely on structural properties only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import MAX_WEIGHT, WeightedDag

__all__ = [
    "GenSpec",
    "CnfFormula",
    "gen_pref_attach",
    "gen_embedded",
    "from_3sat",
    "sat_layout",
    "unitize",
]


@dataclass(frozen=True)
class GenSpec:
    components: int = 10
    vertices_per_component: int = 1000
    outdegree: int = 5
    sinks_per_component: int = 1
    k: int = 0
    seed: int = 0

    def __post_init__(self):
        for name in ("components", "vertices_per_component", "outdegree", "sinks_per_component"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.k < 0:
            raise ValueError("k must be >= 0")


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        cls = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cls)
        if self.num_vars < 0:
            raise ValueError("variable count must be >= 0")
        for c in cls:
            if not c:
                raise ValueError("empty clause")
            for l in c:
                if l == 0 or abs(l) > self.num_vars:
                    raise ValueError(f"literal {l} out of range")


def _pa_arcs(c, n, d, rng, offset=0):
    """Preferential attachment arcs over local ids ``0..c+n-1``.

    A pool holds each vertex once plus once per received arc, so a uniform
    pick from it is proportional to indegree + 1.  Targets of a new vertex
    are drawn from the pool as it stood before the vertex arrived.
    """
    pool = list(range(c))
    arcs = []
    choice = rng.random
    for v in range(c, c + n):
        size = len(pool)
        targets = []
        for _ in range(d):
            w = pool[int(choice() * size)]
            if w not in targets:
                targets.append(w)
        for w in targets:
            arcs.append((v + offset, w + offset))
            pool.append(w)
        pool.append(v)
    return arcs


def gen_pref_attach(c: int, n: int, d: int, seed: int = 0) -> WeightedDag:
    """``c`` seed sinks, then ``n`` vertices with up to ``d`` arcs to older ones."""
    if c < 1 or d < 1 or n < 0:
        raise ValueError("need c >= 1, d >= 1, n >= 0")
    rng = random.Random(seed)
    arcs = _pa_arcs(c, n, d, rng)
    return WeightedDag(c + n, arcs, check_duplicates=False)


def gen_embedded(spec: GenSpec) -> tuple[WeightedDag, list[int]]:
    """Disjoint single-sink attachment graphs joined by ``k`` extra arcs.

    Global ids interleave the components round-robin (local vertex ``i`` of
    component ``j`` gets ``i * components + j``), a global creation order.
    Each extra arc joins two components and points from the larger id to the
    smaller, so the graph stays acyclic.  Returns the graph and the ids of
    the extra arcs, which form a valid partitioning set.
    """
    C = spec.components
    per = spec.vertices_per_component
    if spec.k and C < 2:
        raise ValueError("embedding arcs needs at least two components")
    if spec.sinks_per_component != 1:
        raise ValueError("embedded instances use one sink per component")
    rng = random.Random(spec.seed)
    size = per
    arcs = []
    for j in range(C):
        local = _pa_arcs(1, size - 1, spec.outdegree, rng)
        arcs.extend((u * C + j, v * C + j) for u, v in local)
    n = size * C
    cross_pairs = (n * n - sum(size * size for _ in range(C))) // 2
    if spec.k > cross_pairs:
        raise ValueError(f"k={spec.k} exceeds the {cross_pairs} available cross-component pairs")
    chosen = set()
    extra = []
    while len(extra) < spec.k:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u % C == v % C:
            continue
        if u < v:
            u, v = v, u
        if (u, v) in chosen:
            continue
        chosen.add((u, v))
        extra.append((u, v))
    base = len(arcs)
    arcs.extend(extra)
    g = WeightedDag(n, arcs, check_duplicates=False)
    return g, list(range(base, base + len(extra)))


def sat_layout(num_vars: int, num_clauses: int) -> dict:
    """Vertex ids used by :func:`from_3sat`.

    ``f=0, f'=1, t=2, t'=3``; variable ``i`` (1-based) owns
    ``4 + 4(i-1) + {0: x^t, 1: x^f, 2: x, 3: not-x}``; clause ``j`` (0-based)
    is ``4 + 4n + j``.
    """
    base = 4
    return {
        "f": 0, "f'": 1, "t": 2, "t'": 3,
        "var": lambda i: tuple(base + 4 * (i - 1) + r for r in range(4)),
        "clause": lambda j: base + 4 * num_vars + j,
        "n": base + 4 * num_vars + num_clauses,
    }


def from_3sat(phi: CnfFormula) -> tuple[WeightedDag, int]:
    """Instance that has a partitioning set of weight <= k iff ``phi`` is satisfiable.

    Heavy arcs weigh ``k + 1`` so no solution within budget deletes one.
    Repeated literals in a clause share a single arc.
    """
    n, m = phi.num_vars, len(phi.clauses)
    k = 4 * n + 2 * m
    heavy = k + 1
    lay = sat_layout(n, m)
    f, f2, t, t2 = lay["f"], lay["f'"], lay["t"], lay["t'"]
    arcs = [(f, f2, heavy), (t, t2, heavy)]
    for i in range(1, n + 1):
        xt, xf, x, nx = lay["var"](i)
        arcs += [(t, xt, heavy), (f, xf, heavy)]
        for a in (xt, xf):
            arcs += [(a, x, 1), (a, nx, 1)]
        for lit in (x, nx):
            arcs += [(lit, f2, 1), (lit, t2, 1)]
    for j, clause in enumerate(phi.clauses):
        cv = lay["clause"](j)
        arcs.append((t, cv, heavy))
        seen = set()
        for l in clause:
            _, _, x, nx = lay["var"](abs(l))
            target = x if l > 0 else nx
            if target not in seen:
                seen.add(target)
                arcs.append((cv, target, 1))
    return WeightedDag.from_arcs(lay["n"], arcs), k


def unitize(g: WeightedDag, max_vertices: int = 10**7) -> WeightedDag:
    """Replace each arc of weight w > 1 by a unit arc plus w - 1 unit 2-paths.

    New vertices get ids ``g.n, g.n + 1, ...`` in arc order.
    """
    extra = sum(w - 1 for w in g.weights)
    if extra > MAX_WEIGHT or g.n + extra > max_vertices:
        raise OverflowError(f"unitized graph would need {g.n + extra} vertices")
    arcs = []
    nxt = g.n
    for u, v, w in zip(g.tails, g.heads, g.weights):
        arcs.append((u, v))
        for _ in range(w - 1):
            arcs.append((u, nxt))
            arcs.append((nxt, v))
            nxt += 1
    return WeightedDag(nxt, arcs, check_duplicates=False)
