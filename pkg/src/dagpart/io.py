"""Line-based text formats: instances, solutions, tree decompositions, DIMACS CNF.

All formats use 1-based vertex ids on disk and 0-based ids in memory.
"""

from __future__ import annotations

import io
import os
from typing import Iterable, TextIO

from .graph import NotADagError, PartitioningSet, WeightedDag
from .treewidth import TreeDecomposition

__all__ = [
    "FormatError",
    "read_instance",
    "write_instance",
    "read_solution",
    "write_solution",
    "read_td",
    "write_td",
    "read_cnf",
    "write_cnf",
]


class FormatError(ValueError):
    def __init__(self, lineno: int | None, msg: str):
        where = f"line {lineno}: " if lineno else ""
        super().__init__(where + msg)
        self.lineno = lineno


def _lines(src) -> Iterable[tuple[int, list[str]]]:
    # a path, or an open text stream such as io.StringIO
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(os.fspath(src), encoding="ascii") as fh:
            text = fh.read()
    for no, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0] == "c":
            continue
        yield no, toks


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(no, f"{what} must be an integer, got {tok!r}") from None


def _vertex(tok, no, n):
    v = _int(tok, no, "vertex id")
    if not 1 <= v <= n:
        raise FormatError(no, f"vertex {v} out of range 1..{n}")
    return v - 1


def read_instance(src) -> WeightedDag:
    """Parse ``p dagp n m`` followed by ``a u v w`` lines."""
    n = m = None
    arcs, ws = [], []
    seen = set()
    last = 0
    for no, toks in _lines(src):
        last = no
        if toks[0] == "p":
            if n is not None:
                raise FormatError(no, "second header line")
            if len(toks) != 4 or toks[1] != "dagp":
                raise FormatError(no, "header must be 'p dagp <n> <m>'")
            n, m = _int(toks[2], no, "n"), _int(toks[3], no, "m")
            if n < 0 or m < 0:
                raise FormatError(no, "negative size in header")
        elif toks[0] == "a":
            if n is None:
                raise FormatError(no, "arc before header")
            if len(toks) != 4:
                raise FormatError(no, "arc line must be 'a <u> <v> <w>'")
            u, v = _vertex(toks[1], no, n), _vertex(toks[2], no, n)
            w = _int(toks[3], no, "weight")
            if w < 1:
                raise FormatError(no, "weight must be >= 1")
            if u == v:
                raise FormatError(no, "self-loop")
            if (u, v) in seen:
                raise FormatError(no, f"duplicate arc {u + 1} {v + 1}")
            seen.add((u, v))
            arcs.append((u, v))
            ws.append(w)
        else:
            raise FormatError(no, f"unexpected record {toks[0]!r}")
    if n is None:
        raise FormatError(None, "missing 'p dagp' header")
    if len(arcs) != m:
        raise FormatError(last, f"header announces {m} arcs, found {len(arcs)}")
    try:
        return WeightedDag(n, arcs, ws, check_duplicates=False)
    except NotADagError as exc:
        raise FormatError(None, str(exc)) from None


def write_instance(g: WeightedDag, dst: TextIO | None = None, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"c {c}\n")
    buf.write(f"p dagp {g.n} {g.m}\n")
    for u, v, w in zip(g.tails, g.heads, g.weights):
        buf.write(f"a {u + 1} {v + 1} {w}\n")
    text = buf.getvalue()
    if dst is not None:
        dst.write(text)
    return text


def read_solution(src, g: WeightedDag) -> tuple[int, PartitioningSet]:
    """Parse ``s dagp W K`` and ``d u v`` lines; return (declared weight, set)."""
    declared = count = None
    ids = []
    for no, toks in _lines(src):
        if toks[0] == "s":
            if declared is not None:
                raise FormatError(no, "second solution header")
            if len(toks) != 4 or toks[1] != "dagp":
                raise FormatError(no, "header must be 's dagp <weight> <count>'")
            declared, count = _int(toks[2], no, "weight"), _int(toks[3], no, "count")
        elif toks[0] == "d":
            if declared is None:
                raise FormatError(no, "arc before header")
            if len(toks) != 3:
                raise FormatError(no, "deleted arc line must be 'd <u> <v>'")
            u, v = _vertex(toks[1], no, g.n), _vertex(toks[2], no, g.n)
            a = g.arc_id(u, v)
            if a is None:
                raise FormatError(no, f"arc {u + 1} {v + 1} is not in the instance")
            ids.append(a)
        else:
            raise FormatError(no, f"unexpected record {toks[0]!r}")
    if declared is None:
        raise FormatError(None, "missing 's dagp' header")
    if len(ids) != count:
        raise FormatError(None, f"header announces {count} arcs, found {len(ids)}")
    if len(set(ids)) != len(ids):
        raise FormatError(None, "arc listed twice")
    return declared, PartitioningSet.of(g, ids)


def write_solution(g: WeightedDag, s: PartitioningSet, dst: TextIO | None = None, arcs: bool = True) -> str:
    lines = [f"s dagp {s.total_weight} {len(s)}"]
    if arcs:
        lines += [f"d {u + 1} {v + 1}" for u, v in s.as_pairs(g)]
    text = "\n".join(lines) + "\n"
    if dst is not None:
        dst.write(text)
    return text


def read_td(src) -> TreeDecomposition:
    """Parse a PACE-style ``.td`` file (bag ids and vertices 1-based)."""
    header = None
    bags: dict = {}
    edges = []
    for no, toks in _lines(src):
        if toks[0] == "s":
            if header is not None:
                raise FormatError(no, "second header line")
            if len(toks) != 5 or toks[1] != "td":
                raise FormatError(no, "header must be 's td <bags> <max_bag> <n>'")
            header = tuple(_int(t, no, "header field") for t in toks[2:])
        elif toks[0] == "b":
            if header is None:
                raise FormatError(no, "bag before header")
            if len(toks) < 2:
                raise FormatError(no, "bag line needs an id")
            b = _int(toks[1], no, "bag id")
            if not 1 <= b <= header[0]:
                raise FormatError(no, f"bag id {b} out of range")
            if b - 1 in bags:
                raise FormatError(no, f"bag {b} defined twice")
            vs = [_vertex(t, no, header[2]) for t in toks[2:]]
            if len(vs) > header[1]:
                raise FormatError(no, f"bag {b} larger than the declared maximum")
            bags[b - 1] = set(vs)
        else:
            if header is None:
                raise FormatError(no, "edge before header")
            if len(toks) != 2:
                raise FormatError(no, "edge line must be '<bag> <bag>'")
            a, b = (_int(t, no, "bag id") for t in toks)
            for x in (a, b):
                if not 1 <= x <= header[0]:
                    raise FormatError(no, f"bag id {x} out of range")
            edges.append((a - 1, b - 1))
    if header is None:
        raise FormatError(None, "missing 's td' header")
    if len(bags) != header[0]:
        raise FormatError(None, f"header announces {header[0]} bags, found {len(bags)}")
    return TreeDecomposition(bags, edges)


def write_td(td: TreeDecomposition, n: int, dst: TextIO | None = None) -> str:
    ids = {b: i + 1 for i, b in enumerate(sorted(td.bags))}
    size = max((len(b) for b in td.bags.values()), default=0)
    lines = [f"s td {len(ids)} {size} {n}"]
    for b in sorted(td.bags):
        lines.append(" ".join(["b", str(ids[b])] + [str(v + 1) for v in sorted(td.bags[b])]))
    lines += [f"{ids[a]} {ids[b]}" for a, b in td.edges]
    text = "\n".join(lines) + "\n"
    if dst is not None:
        dst.write(text)
    return text


def read_cnf(src):
    """Parse DIMACS CNF into a :class:`~dagpart.generators.CnfFormula`."""
    from .generators import CnfFormula

    header = None
    clauses, cur = [], []
    for no, toks in _lines(src):
        if toks[0] == "p":
            if header is not None:
                raise FormatError(no, "second header line")
            if len(toks) != 4 or toks[1] != "cnf":
                raise FormatError(no, "header must be 'p cnf <vars> <clauses>'")
            header = (_int(toks[2], no, "vars"), _int(toks[3], no, "clauses"))
            continue
        if toks[0] == "%":
            break
        if header is None:
            raise FormatError(no, "clause before header")
        for t in toks:
            lit = _int(t, no, "literal")
            if lit == 0:
                if not cur:
                    raise FormatError(no, "empty clause")
                clauses.append(tuple(cur))
                cur = []
            else:
                if abs(lit) > header[0]:
                    raise FormatError(no, f"literal {lit} exceeds variable count")
                cur.append(lit)
    if header is None:
        raise FormatError(None, "missing 'p cnf' header")
    if cur:
        clauses.append(tuple(cur))
    if len(clauses) != header[1]:
        raise FormatError(None, f"header announces {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def write_cnf(phi, dst: TextIO | None = None) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in phi.clauses]
    text = "\n".join(lines) + "\n"
    if dst is not None:
        dst.write(text)
    return text
