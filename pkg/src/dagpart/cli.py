"""Command-line entry point.

Exit codes: 0 solved / yes / valid, 1 no / invalid, 2 timeout or node limit,
3 usage or input error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import io as dio
from .bench import load_suite, run_suite, write_csv
from .generators import gen_embedded, gen_pref_attach, from_3sat, unitize, GenSpec
from .graph import is_valid_partitioning_set
from .heuristic import heuristic_partition
from .oracle import brute_force_min
from .reduction import reduce
from .search import Mode, SearchConfig, Status, solve_decision, solve_minimize
from .treewidth import DEFAULT_MAX_WIDTH, solve_treewidth

EXIT_YES, EXIT_NO, EXIT_LIMIT, EXIT_USAGE = 0, 1, 2, 3

_MODES = {"exact": Mode.NONE, "exact-dr": Mode.INITIAL, "exact-interleaved": Mode.INTERLEAVED}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def _default_seed() -> int:
    env = os.environ.get("DAGPART_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"DAGPART_SEED must be an integer, got {env!r}") from None


def _emit(g, s, witness, out):
    dio.write_solution(g, s, out, arcs=witness)


def cmd_solve(a, out) -> int:
    g = dio.read_instance(a.input)
    if a.budget is None and not a.minimize and a.algo in _MODES:
        raise UsageError("decision mode needs --budget (or pass --minimize)")
    if a.algo == "treewidth" and not a.td:
        raise UsageError("--algo treewidth needs --td")
    t0 = time.perf_counter()
    nodes = 0
    if a.algo in _MODES:
        mode = _MODES[a.algo]
        if a.minimize:
            res = solve_minimize(g, mode, a.node_limit, a.timeout)
        else:
            res = solve_decision(g, SearchConfig(mode, a.budget, a.node_limit, a.timeout))
        nodes = res.stats.nodes_expanded
        status, s = res.status, res.witness
    else:
        if a.algo == "heuristic":
            s = heuristic_partition(g, pre_reduce=a.pre_reduce)
        elif a.algo == "treewidth":
            s = solve_treewidth(g, dio.read_td(a.td), max_width=a.max_width, witness=True).witness
        else:
            s = brute_force_min(g)[1]
        status = Status.YES
        if a.budget is not None and not a.minimize and s.total_weight > a.budget:
            status = Status.NO
    ms = (time.perf_counter() - t0) * 1000
    out.write(f"c nodes={nodes} time_ms={ms:.3f}\n")
    out.write(f"c status={'timeout' if status is Status.LIMIT else status.value}\n")
    if status is Status.YES:
        _emit(g, s, a.witness, out)
        return EXIT_YES
    return EXIT_NO if status is Status.NO else EXIT_LIMIT


def cmd_reduce(a, out) -> int:
    g = dio.read_instance(a.input)
    r, _ = reduce(g)
    with open(a.output, "w") as fh:
        dio.write_instance(r, fh)
    if a.stats:
        out.write(f"r dagp {r.n} {r.m}\n")
    return EXIT_YES


def cmd_verify(a, out) -> int:
    g = dio.read_instance(a.input)
    declared, s = dio.read_solution(a.solution, g)
    ok = declared == s.total_weight and is_valid_partitioning_set(g, s)
    out.write(f"c valid={'yes' if ok else 'no'} weight={s.total_weight}\n")
    return EXIT_YES if ok else EXIT_NO


def cmd_gen(a, out) -> int:
    seed = a.seed if getattr(a, "seed", None) is not None else _default_seed()
    comments = []
    if a.kind == "pa":
        g = gen_pref_attach(a.sinks, a.n, a.outdegree, seed)
        comments.append(f"preferential attachment c={a.sinks} n={a.n} d={a.outdegree} seed={seed}")
    elif a.kind == "embedded":
        spec = GenSpec(a.components, a.vertices, a.outdegree, 1, a.k, seed)
        g, emb = gen_embedded(spec)
        comments.append(f"embedded components={a.components} vertices={a.vertices} d={a.outdegree} k={a.k} seed={seed}")
        if a.embedded:
            from .graph import PartitioningSet

            with open(a.embedded, "w") as fh:
                dio.write_solution(g, PartitioningSet.of(g, emb), fh)
    elif a.kind == "cnf":
        phi = dio.read_cnf(a.input)
        g, k = from_3sat(phi)
        comments.append(f"budget={k}")
        out.write(f"c budget={k}\n")
    else:
        g = unitize(dio.read_instance(a.input))
    with open(a.output, "w") as fh:
        dio.write_instance(g, fh, comments)
    return EXIT_YES


def cmd_bench(a, out) -> int:
    suite = load_suite(a.suite)
    rows = run_suite(suite, a.jobs, a.timeout, base=os.path.dirname(os.path.abspath(a.suite)))
    write_csv(rows, a.csv)
    out.write(f"c rows={len(rows)}\n")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dagpart", description="DAG partitioning solvers and tools")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("--input", required=True)
    s.add_argument("--algo", required=True, choices=["exact", "exact-dr", "exact-interleaved", "heuristic", "treewidth", "brute"])
    s.add_argument("--budget", type=int)
    s.add_argument("--minimize", action="store_true")
    s.add_argument("--td")
    s.add_argument("--witness", action="store_true", help="list the deleted arcs")
    s.add_argument("--timeout", type=float)
    s.add_argument("--node-limit", type=int)
    s.add_argument("--pre-reduce", action="store_true", help="heuristic on the reduced graph")
    s.add_argument("--max-width", type=int, default=DEFAULT_MAX_WIDTH)
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("reduce", help="apply the data reduction")
    r.add_argument("--input", required=True)
    r.add_argument("--output", required=True)
    r.add_argument("--stats", action="store_true")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="check a solution file")
    v.add_argument("--input", required=True)
    v.add_argument("--solution", required=True)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate instances")
    gsub = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    pa = gsub.add_parser("pa", help="preferential attachment graph")
    pa.add_argument("--sinks", type=int, default=2)
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--outdegree", type=int, default=3)
    emb = gsub.add_parser("embedded", help="components joined by k extra arcs")
    emb.add_argument("--components", type=int, default=10)
    emb.add_argument("--vertices", type=int, default=1000)
    emb.add_argument("--outdegree", type=int, default=5)
    emb.add_argument("--k", type=int, default=0)
    emb.add_argument("--embedded", help="also write the extra arcs as a solution file")
    cnf = gsub.add_parser("cnf", help="instance from a DIMACS CNF formula")
    cnf.add_argument("--input", required=True)
    uni = gsub.add_parser("unitize", help="replace weights by unit-weight gadgets")
    uni.add_argument("--input", required=True)
    for sp in (pa, emb, cnf, uni):
        sp.add_argument("--seed", type=int)
        sp.add_argument("--output", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", required=True)
    b.add_argument("--csv", required=True)
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timeout", type=float)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", None) is not None and args.budget < 0:
        print("dagpart: error: --budget must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, ValueError, OSError) as exc:
        print(f"dagpart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
