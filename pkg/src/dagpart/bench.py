"""Benchmark harness: run solver suites and write one CSV row per run."""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields

from .generators import GenSpec, gen_embedded, gen_pref_attach
from .heuristic import heuristic_partition
from .io import read_instance, read_td
from .oracle import brute_force_min
from .reduction import reduce
from .search import Mode, SearchConfig, Status, solve_decision, solve_minimize
from .treewidth import forest_decomposition, heuristic_decomposition, solve_treewidth

__all__ = ["BenchRecord", "ALGORITHMS", "load_suite", "run_suite", "write_csv", "CSV_VERSION"]

CSV_VERSION = 1
ALGORITHMS = ("exact", "exact-dr", "exact-interleaved", "heuristic", "heuristic-dr", "treewidth", "brute")
_MODES = {"exact": Mode.NONE, "exact-dr": Mode.INITIAL, "exact-interleaved": Mode.INTERLEAVED}


@dataclass
class BenchRecord:
    instance: str
    n: int
    m: int
    red_n: int
    red_m: int
    algo: str
    k: int | str
    weight: int | str
    status: str
    time_ms: float
    nodes: int | str


@dataclass(frozen=True)
class _Job:
    name: str
    source: dict
    algo: str
    budget: int | None
    timeout: float | None
    base: str


def load_suite(path) -> list:
    """Read a JSON suite.

    The file holds a list of entries, each with a ``name``, either an
    ``instance`` path or a ``generate`` spec (``{"kind": "embedded", ...}``
    with :class:`GenSpec` fields, or ``{"kind": "pa", "c", "n", "d", "seed"}``),
    a list of ``algorithms`` and optional ``budgets`` (``null`` means
    minimize).  An optional ``td`` path serves the treewidth solver.
    """
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"suite is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise ValueError("suite must be a JSON list")
    for i, e in enumerate(data):
        if not isinstance(e, dict):
            raise ValueError(f"suite entry {i} is not an object")
        if ("instance" in e) == ("generate" in e):
            raise ValueError(f"suite entry {i} needs exactly one of 'instance' or 'generate'")
        algos = e.get("algorithms")
        if not algos or any(a not in ALGORITHMS for a in algos):
            raise ValueError(f"suite entry {i}: algorithms must be a non-empty subset of {ALGORITHMS}")
        budgets = e.get("budgets", [None])
        if not isinstance(budgets, list) or any(b is not None and (not isinstance(b, int) or b < 0) for b in budgets):
            raise ValueError(f"suite entry {i}: budgets must be a list of non-negative integers or null")
    return data


def _build(source: dict, base: str):
    if "instance" in source:
        path = source["instance"]
        return read_instance(path if os.path.isabs(path) else os.path.join(base, path))
    spec = dict(source["generate"])
    kind = spec.pop("kind", "embedded")
    if kind == "embedded":
        return gen_embedded(GenSpec(**spec))[0]
    if kind == "pa":
        return gen_pref_attach(spec["c"], spec["n"], spec["d"], spec.get("seed", 0))
    raise ValueError(f"unknown generator kind {kind!r}")


def _run(job: _Job) -> BenchRecord:
    g = _build(job.source, job.base)
    r, _ = reduce(g)
    k = "" if job.budget is None else job.budget
    t0 = time.perf_counter()
    nodes: int | str = ""
    if job.algo in _MODES:
        mode = _MODES[job.algo]
        if job.budget is None:
            res = solve_minimize(g, mode, timeout=job.timeout)
        else:
            res = solve_decision(g, SearchConfig(mode, job.budget, timeout=job.timeout))
        nodes = res.stats.nodes_expanded
        status = {Status.YES: "yes", Status.NO: "no", Status.LIMIT: "timeout"}[res.status]
        weight = res.witness.total_weight if res.found else status.upper()
    else:
        try:
            weight = _run_direct(g, job)
        except ValueError:
            # e.g. a decomposition wider than the cap; the row records it
            weight = None
        if weight is None:
            status = "error"
            weight = "ERROR"
        else:
            status = "yes" if job.budget is None or weight <= job.budget else "no"
            if status == "no":
                weight = "NO"
    ms = round((time.perf_counter() - t0) * 1000, 3)
    return BenchRecord(job.name, g.n, g.m, r.n, r.m, job.algo, k, weight, status, ms, nodes)


def _run_direct(g, job: _Job) -> int:
    if job.algo.startswith("heuristic"):
        return heuristic_partition(g, pre_reduce=job.algo == "heuristic-dr").total_weight
    if job.algo == "treewidth":
        if "td" in job.source:
            p = job.source["td"]
            td = read_td(p if os.path.isabs(p) else os.path.join(job.base, p))
        else:
            try:
                td = forest_decomposition(g)
            except ValueError:
                td = heuristic_decomposition(g)
        return solve_treewidth(g, td).weight
    return brute_force_min(g)[0]


def run_suite(suite: list, jobs: int = 1, timeout: float | None = None, base: str = ".") -> list[BenchRecord]:
    """Run every (instance, algorithm, budget) triple; rows follow suite order."""
    work = []
    for e in suite:
        src = {key: e[key] for key in ("instance", "generate", "td") if key in e}
        for algo in e["algorithms"]:
            for b in e.get("budgets", [None]):
                work.append(_Job(e.get("name", ""), src, algo, b, e.get("timeout", timeout), base))
    if jobs <= 1 or len(work) <= 1:
        return [_run(j) for j in work]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(_run, work))


def write_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# dagpart bench schema v{CSV_VERSION}\n")
        w = csv.writer(fh)
        w.writerow([f.name for f in fields(BenchRecord)])
        for r in records:
            w.writerow(astuple(r))
