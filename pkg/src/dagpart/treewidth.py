"""Dynamic programming over nice tree decompositions.

A table entry is keyed by a pattern ``(R, ext, G, P)``:

* ``R``   arcs among bag vertices not deleted,
* ``ext`` sinks outside the bag reachable from it (kept by their vertex id),
* ``G``   transitively closed reachability among bag vertices and ``ext``,
* ``P``   a partition of bag + ``ext`` saying which vertices should end up
  in the same final component; each block holds at most one ``ext`` sink.

All four parts are sorted tuples, so keys compare and hash canonically.  The
value is the minimum weight of a partial solution in the subtree matching
the pattern.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

from .graph import PartitioningSet, WeightedDag

__all__ = [
    "TreeDecomposition",
    "NiceNode",
    "NiceTreeDecomposition",
    "DecompositionError",
    "Pattern",
    "validate_td",
    "make_nice",
    "forest_decomposition",
    "heuristic_decomposition",
    "dp_leaf",
    "dp_forget",
    "dp_introduce",
    "dp_join",
    "run_dp",
    "solve_treewidth",
    "TreewidthResult",
    "table_size_bound",
    "DEFAULT_MAX_WIDTH",
]

DEFAULT_MAX_WIDTH = 6


class DecompositionError(ValueError):
    """Raised for invalid decompositions; ``kind`` names the violated property."""

    def __init__(self, kind: str, msg: str):
        super().__init__(f"{kind}: {msg}")
        self.kind = kind


@dataclass
class TreeDecomposition:
    bags: dict  # node id -> frozenset of vertices
    edges: list = field(default_factory=list)

    def __post_init__(self):
        self.bags = {int(k): frozenset(v) for k, v in self.bags.items()}
        self.edges = [(int(a), int(b)) for a, b in self.edges]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


@dataclass(frozen=True)
class NiceNode:
    kind: str  # "leaf", "introduce", "forget" or "join"
    bag: frozenset
    vertex: int | None = None
    children: tuple = ()


@dataclass
class NiceTreeDecomposition:
    """Nodes in post-order (children first); the last node is the root."""

    nodes: list

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(x.bag) for x in self.nodes), default=0) - 1

    def check(self) -> None:
        """Verify the node typing against bag differences."""
        for i, x in enumerate(self.nodes):
            kids = [self.nodes[c] for c in x.children]
            if any(c >= i for c in x.children):
                raise DecompositionError("order", f"node {i} precedes a child")
            if x.kind == "leaf":
                ok = not kids and not x.bag
            elif x.kind == "introduce":
                ok = len(kids) == 1 and x.vertex not in kids[0].bag and x.bag == kids[0].bag | {x.vertex}
            elif x.kind == "forget":
                ok = len(kids) == 1 and x.vertex in kids[0].bag and x.bag == kids[0].bag - {x.vertex}
            elif x.kind == "join":
                ok = len(kids) == 2 and kids[0].bag == x.bag == kids[1].bag
            else:
                ok = False
            if not ok:
                raise DecompositionError("typing", f"node {i} ({x.kind}) does not match its children")
        if self.nodes and self.nodes[-1].bag:
            raise DecompositionError("typing", "root bag is not empty")


def _tree_adjacency(td: TreeDecomposition):
    adj = {b: [] for b in td.bags}
    for a, b in td.edges:
        if a not in adj or b not in adj:
            raise DecompositionError("tree", f"edge ({a},{b}) names an unknown bag")
        adj[a].append(b)
        adj[b].append(a)
    return adj


def validate_td(g: WeightedDag, td: TreeDecomposition) -> int:
    """Check coverage, arc coverage and connectivity; return the width."""
    adj = _tree_adjacency(td)
    nb = len(td.bags)
    if nb == 0:
        if g.n:
            raise DecompositionError("coverage", "no bags")
        return -1
    if len(td.edges) != nb - 1:
        raise DecompositionError("tree", "bag graph is not a tree")
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != nb:
        raise DecompositionError("tree", "bag graph is not connected")
    where: dict = {}
    for b, bag in td.bags.items():
        for v in bag:
            if not 0 <= v < g.n:
                raise DecompositionError("coverage", f"bag {b} holds unknown vertex {v}")
            where.setdefault(v, set()).add(b)
    for v in range(g.n):
        if v not in where:
            raise DecompositionError("coverage", f"vertex {v} is in no bag")
    for u, v in zip(g.tails, g.heads):
        if not (where[u] & where[v]):
            raise DecompositionError("arc", f"arc ({u},{v}) is in no bag")
    for v, nodes in where.items():
        first = next(iter(nodes))
        seen = {first}
        stack = [first]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            raise DecompositionError("connectivity", f"bags holding vertex {v} are not connected")
    return td.width


def _contract_subsets(td: TreeDecomposition):
    """Merge bags into a neighbour containing them until none is left."""
    bags = dict(td.bags)
    adj = {b: set() for b in bags}
    for a, b in td.edges:
        adj[a].add(b)
        adj[b].add(a)
    changed = True
    while changed:
        changed = False
        for a in sorted(bags):
            for b in sorted(adj[a]):
                if bags[a] <= bags[b]:
                    for c in adj[a]:
                        if c != b:
                            adj[c].discard(a)
                            adj[c].add(b)
                            adj[b].add(c)
                    adj[b].discard(a)
                    del adj[a], bags[a]
                    changed = True
                    break
            if changed:
                break
    edges = sorted({(min(a, b), max(a, b)) for a in adj for b in adj[a]})
    return TreeDecomposition(bags, edges)


def make_nice(td: TreeDecomposition, n: int | None = None) -> NiceTreeDecomposition:
    """Nice decomposition of the same width.

    The tree is rooted at its smallest bag id.  Along each tree edge the
    vertices leaving the bag are forgotten first, then the new ones are
    introduced, each phase in ascending vertex order; a bag with several
    children becomes a left-leaning chain of joins.  If there are more bags
    than ``max(n, 1)`` (``n`` defaults to the number of covered vertices),
    bags contained in a neighbour are merged away first, which bounds the
    node count by ``(2t + 4) * max(n, 1) + t + 1`` for width ``t``.
    """
    if n is None:
        n = len(set().union(*td.bags.values())) if td.bags else 0
    if len(td.bags) > max(n, 1):
        td = _contract_subsets(td)
    nodes: list = []

    def add(kind, bag, vertex=None, children=()):
        nodes.append(NiceNode(kind, frozenset(bag), vertex, tuple(children)))
        return len(nodes) - 1

    if not td.bags:
        add("leaf", ())
        return NiceTreeDecomposition(nodes)
    adj = _tree_adjacency(td)
    root = min(td.bags)
    parent = {root: None}
    order = [root]
    for x in order:
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    kids = {x: [] for x in order}
    for x in order[1:]:
        kids[parent[x]].append(x)

    def walk(cur, frm, to):
        bag = set(frm)
        for v in sorted(frm - to):
            bag.discard(v)
            cur = add("forget", bag, v, (cur,))
        for v in sorted(to - frm):
            bag.add(v)
            cur = add("introduce", bag, v, (cur,))
        return cur

    top: dict = {}
    for x in reversed(order):
        bag = td.bags[x]
        if not kids[x]:
            cur = walk(add("leaf", ()), frozenset(), bag)
        else:
            subs = [walk(top[c], td.bags[c], bag) for c in kids[x]]
            cur = subs[0]
            for s in subs[1:]:
                cur = add("join", bag, None, (cur, s))
        top[x] = cur
    walk(top[root], td.bags[root], frozenset())
    nice = NiceTreeDecomposition(nodes)
    return nice


def forest_decomposition(g: WeightedDag) -> TreeDecomposition:
    """Width-1 decomposition for graphs whose underlying graph is a forest."""
    adj = [set() for _ in range(g.n)]
    for u, v in zip(g.tails, g.heads):
        adj[u].add(v)
        adj[v].add(u)
    parent = [-2] * g.n
    bags, edges = {}, []
    prev_root = None
    for r in range(g.n):
        if parent[r] != -2:
            continue
        parent[r] = -1
        bags[r] = {r}
        if prev_root is not None:
            edges.append((prev_root, r))
        prev_root = r
        stack = [r]
        while stack:
            x = stack.pop()
            for y in sorted(adj[x]):
                if y == parent[x]:
                    continue
                if parent[y] != -2:
                    raise ValueError("underlying graph has a cycle")
                parent[y] = x
                bags[y] = {x, y}
                edges.append((x, y))
                stack.append(y)
    return TreeDecomposition(bags, edges)


def heuristic_decomposition(g: WeightedDag) -> TreeDecomposition:
    """Decomposition of the underlying graph by greedy min-degree elimination."""
    import networkx as nx
    from networkx.algorithms.approximation import treewidth_min_degree

    und = nx.Graph()
    und.add_nodes_from(range(g.n))
    und.add_edges_from(zip(g.tails, g.heads))
    if g.n == 0:
        return TreeDecomposition({0: set()}, [])
    _, tree = treewidth_min_degree(und)
    ids = {bag: i for i, bag in enumerate(sorted(tree.nodes, key=lambda b: sorted(b)))}
    return TreeDecomposition({i: set(b) for b, i in ids.items()}, [(ids[a], ids[b]) for a, b in tree.edges])


class Pattern(NamedTuple):
    R: tuple
    ext: tuple
    G: tuple
    P: tuple


EMPTY = Pattern((), (), (), ())


def _closure(vertices, arcs) -> tuple:
    succ = {v: set() for v in vertices}
    for u, w in arcs:
        succ[u].add(w)
    reach = {}

    def go(v):
        r = reach.get(v)
        if r is None:
            r = set()
            for w in succ[v]:
                r.add(w)
                r |= go(w)
            reach[v] = r
        return r

    return tuple(sorted((u, w) for u in vertices for w in go(u)))


def _canon_parts(parts) -> tuple:
    return tuple(sorted(tuple(sorted(p)) for p in parts if p))


class _Entry:
    """Witness back-pointer: arcs deleted at this step plus child entries."""

    __slots__ = ("arcs", "kids")

    def __init__(self, arcs=(), kids=()):
        self.arcs = arcs
        self.kids = kids

    def collect(self) -> set:
        out, stack = set(), [self]
        while stack:
            e = stack.pop()
            out.update(e.arcs)
            stack.extend(k for k in e.kids if k is not None)
        return out


def _update(table, key, weight, entry, track):
    old = table.get(key)
    if old is None or weight < old[0]:
        table[key] = (weight, entry if track else None)


def dp_leaf() -> dict:
    """Table of a leaf: the empty pattern at weight 0."""
    return {EMPTY: (0, _Entry())}


def dp_forget(child: dict, v: int, track: bool = True) -> dict:
    """Table after forgetting bag vertex ``v``."""
    out: dict = {}
    for pat, (w, ent) in child.items():
        R, ext, G, P = pat
        R2 = tuple(a for a in R if v not in a)
        outs = [b for a, b in G if a == v]
        ins = [a for a, b in G if b == v]
        part = next(p for p in P if v in p)
        ext_set = set(ext)
        if not outs and not ins:
            if part != (v,):
                continue
            key = Pattern(R2, ext, G, tuple(p for p in P if p != part))
        elif not outs:
            if ext_set & set(part):
                continue
            key = Pattern(R2, tuple(sorted(ext_set | {v})), G, P)
        else:
            lonely = [u for u in outs if u in ext_set and all(a == v for a, b in G if b == u)]
            if not lonely:
                G2 = tuple(a for a in G if v not in a)
                P2 = _canon_parts([tuple(x for x in p if x != v) for p in P])
                key = Pattern(R2, ext, G2, P2)
            else:
                u = lonely[0]
                if set(part) != {u, v}:
                    continue
                G2 = tuple(a for a in G if v not in a and u not in a)
                key = Pattern(R2, tuple(x for x in ext if x != u), G2, tuple(p for p in P if p != part))
        _update(out, key, w, ent, track)
    return out


def dp_introduce(child: dict, v: int, arcs, track: bool = True) -> dict:
    """Table after introducing ``v``; ``arcs`` lists ``(arc id, tail, head, weight)``
    for every arc between ``v`` and the child bag."""
    arcs = list(arcs)
    total = sum(a[3] for a in arcs)
    out: dict = {}
    subsets = []
    for r in range(len(arcs) + 1):
        for keep in itertools.combinations(arcs, r):
            others = {a[1] if a[2] == v else a[2] for a in keep}
            dropped = tuple(a[0] for a in arcs if a not in keep)
            subsets.append((keep, others, total - sum(a[3] for a in keep), dropped))
    for pat, (w, ent) in child.items():
        R, ext, G, P = pat
        where = {x: i for i, p in enumerate(P) for x in p}
        verts = [x for p in P for x in p] + [v]
        for keep, others, cost, dropped in subsets:
            blocks = {where[o] for o in others}
            if len(blocks) > 1:
                continue
            pairs = tuple((a[1], a[2]) for a in keep)
            R2 = tuple(sorted(R + pairs))
            G2 = _closure(verts, G + pairs)
            e = _Entry(dropped, (ent,)) if track else None
            if blocks:
                i = blocks.pop()
                options = [i]
            else:
                options = list(range(len(P))) + [None]
            for i in options:
                if i is None:
                    P2 = _canon_parts(list(P) + [(v,)])
                else:
                    P2 = _canon_parts([p + (v,) if j == i else p for j, p in enumerate(P)])
                _update(out, Pattern(R2, ext, G2, P2), w + cost, e, track)
    return out


def dp_join(left: dict, right: dict, bag_arc_weight: int, arc_weight=None, track: bool = True) -> dict:
    """Combine the tables of two children with the same bag.

    ``bag_arc_weight`` is the total weight of arcs inside the bag and
    ``arc_weight`` maps a bag arc ``(u, w)`` to its weight.
    """
    def bag_key(pat):
        ext = set(pat.ext)
        return pat.R, _canon_parts([tuple(x for x in p if x not in ext) for p in pat.P])

    groups: dict = {}
    for pat, val in right.items():
        groups.setdefault(bag_key(pat), []).append((pat, val))
    out: dict = {}
    for pat, (w1, e1) in left.items():
        R, bp = bag_key(pat)
        partners = groups.get((R, bp))
        if not partners:
            continue
        kept = sum(arc_weight[a] for a in R)
        for pat2, (w2, e2) in partners:
            ext = pat.ext + pat2.ext
            verts = [x for p in bp for x in p] + list(ext)
            G = _closure(verts, pat.G + pat2.G)
            blocks = [list(p) for p in bp]
            where = {x: i for i, p in enumerate(bp) for x in p}
            ok = True
            used = set()
            for u in ext:
                src = next(a for a, b in G if b == u and a in where)
                i = where[src]
                if i in used:
                    ok = False
                    break
                used.add(i)
                blocks[i].append(u)
            if not ok:
                continue
            key = Pattern(R, tuple(sorted(ext)), G, _canon_parts(blocks))
            e = _Entry((), (e1, e2)) if track else None
            _update(out, key, w1 + w2 - bag_arc_weight + kept, e, track)
    return out


def table_size_bound(t: int) -> int:
    """Upper bound on the number of patterns at a node of a width-``t`` decomposition."""
    return 3 ** comb(2 * t + 2, 2) * 3 ** comb(t + 1, 2) * (2 * t + 2) ** (2 * t + 2)


def run_dp(g: WeightedDag, nice: NiceTreeDecomposition, track: bool = False, keep_tables: bool = False, sizes=None):
    """Fill all tables bottom-up; return the root table (and all tables if asked).

    When ``sizes`` is a list, the size of every table is appended to it in
    node order.
    """
    pair_w = {(u, v): w for u, v, w in zip(g.tails, g.heads, g.weights)}
    arc_ids = {(u, v): i for i, (u, v) in enumerate(zip(g.tails, g.heads))}
    inc = [[] for _ in range(g.n)]
    for i, (u, v, w) in enumerate(zip(g.tails, g.heads, g.weights)):
        inc[u].append((i, u, v, w))
        inc[v].append((i, u, v, w))
    tables: list = [None] * len(nice.nodes)
    refs = [0] * len(nice.nodes)
    for x in nice.nodes:
        for c in x.children:
            refs[c] += 1
    for i, x in enumerate(nice.nodes):
        if x.kind == "leaf":
            tab = dp_leaf()
        elif x.kind == "forget":
            tab = dp_forget(tables[x.children[0]], x.vertex, track)
        elif x.kind == "introduce":
            child_bag = nice.nodes[x.children[0]].bag
            arcs = [a for a in inc[x.vertex] if (a[2] if a[1] == x.vertex else a[1]) in child_bag]
            tab = dp_introduce(tables[x.children[0]], x.vertex, arcs, track)
        else:
            inside = [(u, v) for (u, v) in arc_ids if u in x.bag and v in x.bag]
            tab = dp_join(
                tables[x.children[0]], tables[x.children[1]],
                sum(pair_w[a] for a in inside), pair_w, track,
            )
        tables[i] = tab
        if sizes is not None:
            sizes.append(len(tab))
        if not keep_tables:
            for c in x.children:
                refs[c] -= 1
                if not refs[c]:
                    tables[c] = None
    return tables[-1], (tables if keep_tables else None)


@dataclass
class TreewidthResult:
    weight: int
    witness: PartitioningSet | None
    width: int
    nodes: int
    max_table: int
    decision: bool | None = None


def solve_treewidth(
    g: WeightedDag,
    td: TreeDecomposition,
    k: int | None = None,
    max_width: int = DEFAULT_MAX_WIDTH,
    witness: bool = False,
) -> TreewidthResult:
    """Optimum via the decomposition; with ``k`` also decide ``optimum <= k``."""
    width = validate_td(g, td)
    if width > max_width:
        raise ValueError(f"decomposition width {width} exceeds the cap {max_width}")
    nice = make_nice(td, g.n)
    sizes: list = []
    root, _ = run_dp(g, nice, track=witness, sizes=sizes)
    if list(root) != [EMPTY]:  # pragma: no cover - deleting every arc always qualifies
        raise AssertionError("root table must hold exactly the empty pattern")
    weight, entry = root[EMPTY]
    wit = PartitioningSet.of(g, entry.collect()) if witness else None
    return TreewidthResult(
        weight, wit, max(width, 0), len(nice.nodes), max(sizes),
        None if k is None else weight <= k,
    )
