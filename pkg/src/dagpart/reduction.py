"""Linear-time data reduction: arc redirection (Rule 1) and loner deletion (Rule 2).

Both rules are driven by one sink-reachability labelling computed in a
single reverse-topological pass.  Rule 1 then redirects every arc from a
vertex reaching several sinks into a vertex reaching exactly one sink ``s``
onto the arc to ``s``; Rule 2 deletes every non-sink reaching exactly one
sink.  One sweep of each suffices, no outer loop is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import PartitioningSet, WeightedDag

__all__ = [
    "MULTIPLE",
    "SinkReachability",
    "ReductionLog",
    "MergeEvent",
    "compute_sink_labels",
    "apply_rule1",
    "apply_rule2",
    "reduce",
    "lift_witness",
]

MULTIPLE = -1


@dataclass(frozen=True)
class SinkReachability:
    """Per-vertex label: the unique reachable sink, or ``MULTIPLE``."""

    labels: tuple

    def __getitem__(self, v: int) -> int:
        return self.labels[v]

    def __len__(self):
        return len(self.labels)

    def unique_sink(self, v: int) -> int | None:
        s = self.labels[v]
        return None if s == MULTIPLE else s

    def is_multiple(self, v: int) -> bool:
        return self.labels[v] == MULTIPLE


@dataclass(frozen=True)
class MergeEvent:
    deleted_arc: int
    beneficiary: tuple  # (v, s) in original vertex ids
    added_weight: int


@dataclass
class ReductionLog:
    """Provenance of one reduction, relative to the graph it was applied to.

    ``arc_map[i]`` lists the arcs of the source graph folded into arc ``i`` of
    the reduced graph; ``vertex_map`` maps surviving source vertices to their
    compacted ids.
    """

    source: WeightedDag
    merges: list = field(default_factory=list)
    deleted_vertices: list = field(default_factory=list)
    vertex_map: dict = field(default_factory=dict)
    arc_map: list = field(default_factory=list)

    @property
    def vertex_deletions(self) -> list[tuple[int, tuple]]:
        """``(vertex, incident source arc ids)`` for every deleted vertex."""
        g = self.source
        return [(v, tuple(sorted(g.out_arcs(v) + g.in_arcs(v)))) for v in self.deleted_vertices]

    def replay(self, g: WeightedDag | None = None) -> WeightedDag:
        """Rebuild the reduced graph from the source graph and the events."""
        g = self.source if g is None else g
        weights = {(u, v): w for u, v, w in zip(g.tails, g.heads, g.weights)}
        order = {(u, v): i for i, (u, v) in enumerate(g.arcs)}
        for ev in self.merges:
            u, w = g.tails[ev.deleted_arc], g.heads[ev.deleted_arc]
            del weights[(u, w)]
            b = ev.beneficiary
            if b not in weights:
                weights[b] = 0
                order[b] = order[(u, w)]
            else:
                order[b] = min(order[b], order[(u, w)])
            weights[b] += ev.added_weight
        gone = set(self.deleted_vertices)
        # reduced arcs are grouped by tail, each at its first source arc
        kept = [
            (a[0], order[a], a) for a in weights if a[0] not in gone and a[1] not in gone
        ]
        kept.sort()
        vm = self.vertex_map
        arcs = [(vm[u], vm[v]) for _, _, (u, v) in kept]
        return WeightedDag(len(vm), arcs, [weights[a] for _, _, a in kept])


def compute_sink_labels(g: WeightedDag) -> SinkReachability:
    """Label each vertex with the one sink it reaches, or ``MULTIPLE``."""
    labels = [MULTIPLE] * g.n
    ptr, out = g.adjacency()
    heads = g.heads
    for v in g._order:
        lo, hi = ptr[v], ptr[v + 1]
        if lo == hi:
            labels[v] = v
            continue
        s = labels[heads[out[lo]]]
        if s != MULTIPLE:
            for j in range(lo + 1, hi):
                if labels[heads[out[j]]] != s:
                    s = MULTIPLE
                    break
        labels[v] = s
    return SinkReachability(tuple(labels))


def _check_labels(g: WeightedDag, labels: SinkReachability | None) -> SinkReachability:
    if labels is None:
        return compute_sink_labels(g)
    if len(labels) != g.n:
        raise ValueError("labels do not match the graph")
    return labels


def _rule1_arcs(g: WeightedDag, labels, multiple_only=False):
    """Arc list after one Rule-1 sweep.

    Returns ``(slots, merges)``; each slot is ``[tail, head, weight, source
    arc ids]``.  Arcs keep the source order by tail; an arc created by
    redirection takes the place of the first arc merged into it.  With
    ``multiple_only`` the arcs of vertices reaching a single sink are left
    out, as Rule 2 deletes them anyway.
    """
    lab = labels.labels
    ptr, out = g.adjacency()
    heads, weights = g.heads, g.weights
    n = g.n
    scratch = [None] * n  # reused per vertex, reset lazily
    slots: list = []
    merges = []
    for v in range(n):
        lo, hi = ptr[v], ptr[v + 1]
        if lab[v] != MULTIPLE:
            if multiple_only:
                continue
            for j in range(lo, hi):
                a = out[j]
                slots.append([v, heads[a], weights[a], [a]])
            continue
        # Lazy init: only entries that can be touched for this vertex.
        redirect = False
        for j in range(lo, hi):
            w = heads[out[j]]
            s = lab[w]
            if s != MULTIPLE and s != w:
                scratch[s] = None
                redirect = True
        if not redirect:
            for j in range(lo, hi):
                a = out[j]
                slots.append([v, heads[a], weights[a], [a]])
            continue
        for j in range(lo, hi):
            w = heads[out[j]]
            if lab[w] == w:
                scratch[w] = None
        for j in range(lo, hi):
            a = out[j]
            w = heads[a]
            s = lab[w]
            if s == MULTIPLE:
                slots.append([v, w, weights[a], [a]])
            elif s == w:
                slot = scratch[w]
                if slot is None:
                    slot = [v, w, 0, []]
                    scratch[w] = slot
                    slots.append(slot)
                slot[2] += weights[a]
                slot[3].append(a)
            else:
                slot = scratch[s]
                if slot is None:
                    slot = [v, s, 0, []]
                    scratch[s] = slot
                    slots.append(slot)
                slot[2] += weights[a]
                slot[3].append(a)
                merges.append(MergeEvent(a, (v, s), weights[a]))
    return slots, merges


def apply_rule1(g: WeightedDag, labels: SinkReachability | None = None):
    """Redirect all Rule-1 arcs in one pass.

    Returns the new graph (same vertex ids) and a log fragment whose
    ``arc_map`` relates new arcs to arcs of ``g``.
    """
    labels = _check_labels(g, labels)
    slots, merges = _rule1_arcs(g, labels)
    new = WeightedDag(g.n, [(s[0], s[1]) for s in slots], [s[2] for s in slots])
    log = ReductionLog(
        source=g,
        merges=merges,
        vertex_map={v: v for v in range(g.n)},
        arc_map=[tuple(sorted(s[3])) for s in slots],
    )
    return new, log


def apply_rule2(g: WeightedDag, labels: SinkReachability | None = None):
    """Delete every non-sink that reaches exactly one sink; compact ids.

    Only sound once Rule 1 is exhausted on ``g``.
    """
    labels = _check_labels(g, labels)
    lab = labels.labels
    doomed = [v for v in range(g.n) if lab[v] != MULTIPLE and lab[v] != v]
    vm, new_tails, new_heads, new_w, amap = _compact(
        g.n, doomed, g.tails, g.heads, g.weights, [(i,) for i in range(g.m)]
    )
    new = WeightedDag(len(vm), list(zip(new_tails, new_heads)), new_w, check_duplicates=False)
    log = ReductionLog(source=g, deleted_vertices=doomed, vertex_map=vm, arc_map=amap)
    return new, log


def _compact(n, doomed, tails, heads, weights, prov):
    gone = bytearray(n)
    for v in doomed:
        gone[v] = 1
    vm = {}
    for v in range(n):
        if not gone[v]:
            vm[v] = len(vm)
    new_tails, new_heads, new_w, amap = [], [], [], []
    for u, v, w, p in zip(tails, heads, weights, prov):
        if gone[u] or gone[v]:
            continue
        new_tails.append(vm[u])
        new_heads.append(vm[v])
        new_w.append(w)
        amap.append(p)
    return vm, new_tails, new_heads, new_w, amap


def reduce(g: WeightedDag) -> tuple[WeightedDag, ReductionLog]:
    """Apply both rules exhaustively in O(n + m).

    The reduced graph has compacted vertex ids; the log records the merge
    events, the deleted vertices, the old-to-new vertex map and, for every
    reduced arc, the arcs of ``g`` it stands for.
    """
    labels = compute_sink_labels(g)
    lab = labels.labels
    slots, merges = _rule1_arcs(g, labels, multiple_only=True)
    doomed = [v for v in range(g.n) if lab[v] != MULTIPLE and lab[v] != v]
    vm, new_tails, new_heads, new_w, amap = _compact(
        g.n,
        doomed,
        [s[0] for s in slots],
        [s[1] for s in slots],
        [s[2] for s in slots],
        [tuple(sorted(s[3])) for s in slots],
    )
    reduced = WeightedDag(len(vm), list(zip(new_tails, new_heads)), new_w, check_duplicates=False)
    log = ReductionLog(source=g, merges=merges, deleted_vertices=doomed, vertex_map=vm, arc_map=amap)
    return reduced, log


def lift_witness(log: ReductionLog, s_reduced) -> PartitioningSet:
    """Map a partitioning set of the reduced graph back to the source graph.

    Every reduced arc expands to the source arcs folded into it, so the
    weight is unchanged.  Validity carries over: each out-arc of a surviving
    vertex is represented by exactly one reduced arc, and deleted vertices
    keep reaching their single sink.
    """
    arcs = s_reduced.arcs if isinstance(s_reduced, PartitioningSet) else frozenset(s_reduced)
    lifted = []
    amap = log.arc_map
    for a in arcs:
        if not 0 <= a < len(amap):
            raise ValueError(f"arc {a} is not in the reduced graph")
        lifted.extend(amap[a])
    return PartitioningSet.of(log.source, lifted)
