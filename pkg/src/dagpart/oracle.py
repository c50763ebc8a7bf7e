"""Exhaustive ground truth for the fast solvers and the treewidth tables."""

from __future__ import annotations

import itertools

from .graph import PartitioningSet, WeightedDag

__all__ = [
    "brute_force_min",
    "sat_brute",
    "enumerate_partial_solutions",
    "canonical_pattern",
    "MAX_BRUTE_ARCS",
    "MAX_PARTIAL_ARCS",
    "MAX_SAT_VARS",
]

MAX_BRUTE_ARCS = 22
MAX_PARTIAL_ARCS = 18
MAX_SAT_VARS = 20


def _valid_checker(g: WeightedDag):
    n, tails, heads = g.n, g.tails, g.heads
    outdeg0 = [g.out_degree(v) for v in range(n)]
    m = g.m

    def valid(chosen: set) -> bool:
        parent = list(range(n))
        outdeg = outdeg0[:]

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in range(m):
            if a in chosen:
                outdeg[tails[a]] -= 1
                continue
            ru, rv = find(tails[a]), find(heads[a])
            if ru != rv:
                parent[ru] = rv
        seen = set()
        for v in range(n):
            if outdeg[v] == 0:
                r = find(v)
                if r in seen:
                    return False
                seen.add(r)
        # every component needs a sink; a finite DAG component always has one
        return True

    return valid


def brute_force_min(g: WeightedDag, max_arcs: int = MAX_BRUTE_ARCS) -> tuple[int, PartitioningSet]:
    """Minimum weight and witness by trying arc subsets.

    Subsets are visited in lexicographic order of their sorted arc ids and
    pruned once their weight exceeds the best found, so among minimum-weight
    sets the lexicographically smallest is returned.
    """
    if g.m > max_arcs:
        raise ValueError(f"brute force limited to {max_arcs} arcs, got {g.m}")
    valid = _valid_checker(g)
    w = g.weights
    m = g.m
    best_w = g.total_weight
    best = tuple(range(m))  # deleting every arc is always valid
    chosen: list = []
    members: set = set()

    def visit(start, weight):
        nonlocal best_w, best
        if weight < best_w and valid(members):
            best_w, best = weight, tuple(chosen)
        for a in range(start, m):
            nw = weight + w[a]
            if nw >= best_w:
                continue
            chosen.append(a)
            members.add(a)
            visit(a + 1, nw)
            chosen.pop()
            members.discard(a)

    visit(0, 0)
    # A set of equal weight earlier in lexicographic order is never skipped:
    # candidates are only discarded when strictly heavier than the incumbent,
    # and ties found later in the order do not replace it.
    return best_w, PartitioningSet.of(g, best)


def sat_brute(num_vars: int, clauses, max_vars: int = MAX_SAT_VARS) -> bool:
    """Satisfiability by trying every assignment."""
    if num_vars > max_vars:
        raise ValueError(f"sat_brute limited to {max_vars} variables")
    clauses = [tuple(c) for c in clauses]
    for bits in itertools.product((False, True), repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def canonical_pattern(g: WeightedDag, bag, region, deleted) -> tuple | None:
    """Pattern induced by a partial solution, or None if it violates the
    partial-solution conditions.

    ``region`` is the vertex set of the subtree (a superset of ``bag``) and
    ``deleted`` a set of arc ids of ``g[region]``.  Returns ``(R, G, P)`` with
    ``P`` the finest admissible partition: the weak components of the kept
    subgraph restricted to the bag and its reachable sinks.
    """
    bag = frozenset(bag)
    region = frozenset(region)
    inner = [a for a in range(g.m) if g.tails[a] in region and g.heads[a] in region]
    kept = [a for a in inner if a not in deleted]
    succ = {v: [] for v in region}
    adj = {v: set() for v in region}
    for a in kept:
        u, v = g.tails[a], g.heads[a]
        succ[u].append(v)
        adj[u].add(v)
        adj[v].add(u)
    comp = {}
    for v in sorted(region):
        if v in comp:
            continue
        stack = [v]
        comp[v] = v
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp[y] = v
                    stack.append(y)
    sinks_ = {v for v in region if not succ[v]}
    outside = region - bag
    # (i) no component holds two sinks outside the bag
    per_comp: dict = {}
    for s in sinks_ & outside:
        c = comp[s]
        if c in per_comp:
            return None
        per_comp[c] = s

    reach = {}

    def reach_of(v):
        if v not in reach:
            acc = {v}
            for w in succ[v]:
                acc |= reach_of(w)
            reach[v] = frozenset(acc)
        return reach[v]

    from_bag = set()
    for v in bag:
        from_bag |= reach_of(v)
    # (ii) a sink in a component touching the bag must be reachable from the bag
    bag_comps = {comp[v] for v in bag}
    for s in sinks_:
        if comp[s] in bag_comps and s not in from_bag:
            return None
    ext = sorted(s for s in sinks_ & outside if s in from_bag)
    r_arcs = tuple(sorted((g.tails[a], g.heads[a]) for a in kept if g.tails[a] in bag and g.heads[a] in bag))
    gv = set(bag) | set(ext)
    g_arcs = tuple(sorted((u, w) for u in gv for w in reach_of(u) if w != u and w in gv))
    parts: dict = {}
    for v in gv:
        parts.setdefault(comp[v], []).append(v)
    p = tuple(sorted(tuple(sorted(x)) for x in parts.values()))
    return (r_arcs, tuple(ext), g_arcs, p)


def _coarsenings(parts, external):
    """All coarsenings of ``parts`` with at most one external vertex per block."""
    parts = list(parts)
    out = []

    def rec(i, blocks):
        if i == len(parts):
            out.append(tuple(sorted(tuple(sorted(b)) for b in blocks)))
            return
        p = parts[i]
        pe = sum(1 for v in p if v in external)
        for j, b in enumerate(blocks):
            if pe and any(v in external for v in b):
                continue
            blocks[j] = b + list(p)
            rec(i + 1, blocks)
            blocks[j] = b
        blocks.append(list(p))
        rec(i + 1, blocks)
        blocks.pop()

    rec(0, [])
    return out


def enumerate_partial_solutions(g: WeightedDag, bag, region, max_arcs: int = MAX_PARTIAL_ARCS) -> dict:
    """Minimum weight per pattern over all partial solutions of ``g[region]``.

    Every arc subset of the induced subgraph is tried; a qualifying subset
    contributes to its own pattern and to every coarsening of its partition
    that keeps at most one external sink per block.
    """
    region = frozenset(region)
    inner = [a for a in range(g.m) if g.tails[a] in region and g.heads[a] in region]
    if len(inner) > max_arcs:
        raise ValueError(f"partial-solution enumeration limited to {max_arcs} arcs")
    table: dict = {}
    for r in range(len(inner) + 1):
        for subset in itertools.combinations(inner, r):
            pat = canonical_pattern(g, bag, region, set(subset))
            if pat is None:
                continue
            weight = g.weight_of(subset)
            r_arcs, ext, g_arcs, p = pat
            for q in _coarsenings(p, set(ext)):
                key = (r_arcs, ext, g_arcs, q)
                if weight < table.get(key, weight + 1):
                    table[key] = weight
    return table
