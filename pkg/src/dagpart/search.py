"""Bounded search tree for the decision problem, with optional data reduction.

Vertices are labelled in reverse topological order.  A vertex whose
out-neighbours all carry the same sink label inherits it; otherwise the
solver branches over the distinct labels ``D`` (ascending), deleting the arcs
towards every other label.  A node is pruned when ``|D| - 1`` exceeds the
remaining budget, since each choice deletes at least ``|D| - 1`` arcs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .graph import PartitioningSet, WeightedDag
from .reduction import ReductionLog, lift_witness, reduce

__all__ = [
    "Mode",
    "Status",
    "SearchConfig",
    "SearchStats",
    "SearchResult",
    "solve_decision",
    "solve_minimize",
]


class Mode(str, Enum):
    NONE = "none"
    INITIAL = "initial"
    INTERLEAVED = "interleaved"


class Status(str, Enum):
    YES = "yes"
    NO = "no"
    LIMIT = "limit"


@dataclass(frozen=True)
class SearchConfig:
    mode: Mode = Mode.INTERLEAVED
    budget: int = 0
    node_limit: int | None = None
    timeout: float | None = None
    collect_witness: bool = True
    interleave_stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be >= 1")
        if self.interleave_stride < 1:
            raise ValueError("interleave_stride must be >= 1")


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    wall_time: float = 0.0
    probes: list = field(default_factory=list)


@dataclass
class SearchResult:
    status: Status
    witness: PartitioningSet | None
    stats: SearchStats

    @property
    def found(self) -> bool:
        return self.status is Status.YES


class _Exhausted(Exception):
    pass


class _Control:
    """Shared node counter with cooperative limit and deadline checks."""

    __slots__ = ("nodes", "limit", "deadline", "max_depth")

    def __init__(self, node_limit=None, timeout=None):
        self.nodes = 0
        self.limit = node_limit
        self.deadline = None if timeout is None else time.perf_counter() + timeout
        self.max_depth = 0

    def tick(self):
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise _Exhausted
        if self.deadline is not None and not self.nodes & 255:
            if time.perf_counter() > self.deadline:
                raise _Exhausted


def _search(h: WeightedDag, k: int, ctl: _Control, depth0: int = 0, on_branch=None):
    """Run the labelling search on ``h``; return a list of deleted arc ids or None.

    ``on_branch(pos, labels, chosen_arcs, weight, depth)`` is called right
    after a branch is taken; if it returns something other than ``NotImplemented``
    that value (a list of arcs or None) is the outcome of the whole subtree.
    """
    n = h.n
    order = h._order
    ptr, out = h.adjacency()
    heads, weights = h.heads, h.weights
    L = [-1] * n
    S: list = []
    stack: list = []
    i = 0
    wt = 0
    while True:
        while i < n:
            v = order[i]
            lo, hi = ptr[v], ptr[v + 1]
            if lo == hi:
                L[v] = v
                i += 1
                continue
            first = L[heads[out[lo]]]
            for j in range(lo + 1, hi):
                if L[heads[out[j]]] != first:
                    break
            else:
                L[v] = first
                i += 1
                continue
            D = sorted({L[heads[out[j]]] for j in range(lo, hi)})
            if len(D) - 1 <= k - wt:
                stack.append([i, v, D, 0, len(S), wt])
                d = depth0 + len(stack)
                if d > ctl.max_depth:
                    ctl.max_depth = d
            break
        else:
            return S
        # Backtrack to the next untried branch.
        while stack:
            fr = stack[-1]
            pos, v, D, bi, slen, w0 = fr
            del S[slen:]
            if bi >= len(D):
                stack.pop()
                continue
            fr[3] = bi + 1
            s = D[bi]
            lo, hi = ptr[v], ptr[v + 1]
            dw = 0
            for j in range(lo, hi):
                a = out[j]
                if L[heads[a]] != s:
                    S.append(a)
                    dw += weights[a]
            if w0 + dw > k:
                continue
            ctl.tick()
            L[v] = s
            wt = w0 + dw
            i = pos + 1
            if on_branch is not None:
                res = on_branch(i, L, S, wt, depth0 + len(stack))
                if res is not NotImplemented:
                    if res is not None:
                        return res
                    continue
            break
        else:
            return None


def _residual(h: WeightedDag, pos: int, L: list):
    """Instance left after the first ``pos`` vertices of the order are labelled.

    Unlabelled vertices keep their arcs among themselves; an arc into a
    labelled vertex ``w`` becomes an arc to the sink ``L[w]`` (parallel ones
    merged).  Returns the residual graph and, per residual arc, the arcs of
    ``h`` it stands for.
    """
    order = h._order
    done = bytearray(h.n)
    for j in range(pos):
        done[order[j]] = 1
    ptr, out = h.adjacency()
    heads, weights = h.heads, h.weights
    ids: dict = {}
    for v in range(h.n):
        if not done[v]:
            ids[v] = None
    arcs: dict = {}
    for u in ids:
        for j in range(ptr[u], ptr[u + 1]):
            a = out[j]
            w = heads[a]
            if done[w]:
                w = L[w]
            key = (u, w)
            e = arcs.get(key)
            if e is None:
                arcs[key] = [weights[a], [a]]
            else:
                e[0] += weights[a]
                e[1].append(a)
    for (_, w) in arcs:
        if done[w]:
            ids[w] = None
    vm = {v: i for i, v in enumerate(sorted(ids))}
    items = list(arcs.items())
    res = WeightedDag(
        len(vm),
        [(vm[u], vm[w]) for (u, w), _ in items],
        [e[0] for _, e in items],
        check_duplicates=False,
    )
    return res, [tuple(e[1]) for _, e in items]


def _solve_reduced(g: WeightedDag, k: int, ctl: _Control, stride: int, depth0: int = 0):
    """Interleaved mode: reduce, search, and re-reduce the residual on branching."""
    r, log = reduce(g)
    if r.m == 0:
        return lift_witness(log, ()).arcs

    def on_branch(pos, L, S, wt, depth):
        if depth % stride:
            return NotImplemented
        res, prov = _residual(r, pos, L)
        sub = _solve_reduced(res, k - wt, ctl, stride, depth)
        if sub is None:
            return None
        arcs = list(S)
        for a in sub:
            arcs.extend(prov[a])
        return arcs

    found = _search(r, k, ctl, depth0, on_branch)
    if found is None:
        return None
    return lift_witness(log, found).arcs


def solve_decision(g: WeightedDag, cfg: SearchConfig | None = None, **kw) -> SearchResult:
    """Decide whether ``g`` has a partitioning set of weight at most ``cfg.budget``.

    Keyword arguments build a :class:`SearchConfig` when ``cfg`` is omitted.
    A run cut short by the node limit or timeout reports ``Status.LIMIT``.
    """
    if cfg is None:
        cfg = SearchConfig(**kw)
    elif kw:
        raise TypeError("pass either cfg or keyword options, not both")
    ctl = _Control(cfg.node_limit, cfg.timeout)
    return _decide(g, cfg, ctl, None)


def _decide(g, cfg, ctl, cached):
    t0 = time.perf_counter()
    k = cfg.budget
    ctl.tick()  # the root call
    try:
        if cfg.mode is Mode.NONE:
            found = _search(g, k, ctl)
            arcs = None if found is None else found
        elif cfg.mode is Mode.INITIAL:
            r, log = cached if cached is not None else reduce(g)
            found = _search(r, k, ctl)
            arcs = None if found is None else lift_witness(log, found).arcs
        else:
            arcs = _solve_reduced(g, k, ctl, cfg.interleave_stride)
        status = Status.NO if arcs is None else Status.YES
    except _Exhausted:
        arcs, status = None, Status.LIMIT
    stats = SearchStats(ctl.nodes, ctl.max_depth, time.perf_counter() - t0)
    witness = None
    if arcs is not None:
        witness = PartitioningSet.of(g, arcs)
        if witness.total_weight > k:  # pragma: no cover - invariant
            raise AssertionError("search returned a set over budget")
        if not cfg.collect_witness:
            witness = None
    return SearchResult(status, witness, stats)


def solve_minimize(
    g: WeightedDag,
    mode: Mode | str = Mode.INTERLEAVED,
    node_limit: int | None = None,
    timeout: float | None = None,
    interleave_stride: int = 1,
) -> SearchResult:
    """Minimum-weight partitioning set via exponential then binary search on k.

    Probes k = 0, 1, 2, 4, ... until the first yes; a found witness of weight
    w caps the interval at w.  ``node_limit`` and ``timeout`` cover all probes.
    """
    mode = Mode(mode)
    t0 = time.perf_counter()
    ctl = _Control(node_limit, timeout)
    cached = reduce(g) if mode is Mode.INITIAL else None
    stats = SearchStats()

    def probe(k):
        cfg = SearchConfig(mode, k, interleave_stride=interleave_stride)
        before = ctl.nodes
        res = _decide(g, cfg, ctl, cached)
        stats.probes.append((k, res.status.value, ctl.nodes - before))
        return res

    best = None
    lo = 0  # every k < lo is a no
    k = 0
    while True:
        res = probe(k)
        if res.status is Status.LIMIT:
            return _finish(Status.LIMIT, best, stats, ctl, t0)
        if res.found:
            best = res.witness
            break
        lo = k + 1
        k = 1 if k == 0 else 2 * k
    hi = best.total_weight
    while lo < hi:
        mid = (lo + hi) // 2
        res = probe(mid)
        if res.status is Status.LIMIT:
            return _finish(Status.LIMIT, best, stats, ctl, t0)
        if res.found:
            best = res.witness
            hi = best.total_weight
        else:
            lo = mid + 1
    return _finish(Status.YES, best, stats, ctl, t0)


def _finish(status, best, stats, ctl, t0):
    stats.nodes_expanded = ctl.nodes
    stats.max_depth = ctl.max_depth
    stats.wall_time = time.perf_counter() - t0
    return SearchResult(status, best, stats)
