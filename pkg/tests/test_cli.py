import csv
import io
import json
import subprocess
import sys

import pytest

from dagpart.cli import main
from dagpart.generators import CnfFormula
from dagpart.io import read_instance, write_cnf, write_instance, write_td
from dagpart.treewidth import TreeDecomposition
from instances import example_graph, random_dags, two_sink


def run(*argv):
    out = io.StringIO()
    try:
        code = main(list(map(str, argv)), out)
    except SystemExit as exc:
        code = exc.code
    return code, out.getvalue()


def solution_lines(text):
    return [l for l in text.splitlines() if not l.startswith("c ")]


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in [("example", example_graph()), ("two", two_sink(3, 1))]:
        p = tmp_path / f"{name}.gr"
        p.write_text(write_instance(g))
        paths[name] = p
    one = tmp_path / "one.gr"
    one.write_text("p dagp 1 0\n")
    paths["one"] = one
    cnf = tmp_path / "f.cnf"
    cnf.write_text(write_cnf(CnfFormula(2, ((1, -2),))))
    paths["cnf"] = cnf
    td = tmp_path / "two.td"
    td.write_text(write_td(TreeDecomposition({0: {0, 1}, 1: {0, 2}}, [(0, 1)]), 3))
    paths["td"] = td
    paths["dir"] = tmp_path
    return paths


class TestSolve:
    def test_heuristic_on_one_sink(self, files):
        code, out = run("solve", "--input", files["one"], "--algo", "heuristic")
        assert code == 0 and solution_lines(out) == ["s dagp 0 0"]

    def test_exit_codes(self, files):
        assert run("solve", "--input", files["two"], "--algo", "exact", "--budget", 0)[0] == 1
        code, out = run("solve", "--input", files["two"], "--algo", "exact", "--budget", 1, "--witness")
        assert code == 0
        assert solution_lines(out) == ["s dagp 1 1", "d 1 3"]
        assert out.startswith("c nodes=")

    def test_limit_exit(self, files, tmp_path):
        from dagpart.generators import GenSpec, gen_embedded

        g, _ = gen_embedded(GenSpec(4, 40, 3, 1, 6, seed=1))
        p = tmp_path / "emb.gr"
        p.write_text(write_instance(g))
        code, out = run("solve", "--input", p, "--algo", "exact", "--budget", 6, "--node-limit", 1)
        assert code == 2 and "c status=timeout" in out

    def test_formula_instance(self, files):
        gr = files["dir"] / "formula.gr"
        assert run("gen", "cnf", "--input", files["cnf"], "--output", gr)[0] == 0
        code, out = run("solve", "--input", gr, "--algo", "exact-interleaved", "--budget", 10, "--witness")
        assert code == 0
        w = int(solution_lines(out)[0].split()[2])
        assert w <= 10

    @pytest.mark.parametrize("algo", ["exact", "exact-dr", "exact-interleaved", "heuristic", "brute"])
    def test_minimize_weights(self, files, algo):
        code, out = run("solve", "--input", files["example"], "--algo", algo, "--minimize")
        assert code == 0 and solution_lines(out)[0].startswith("s dagp 1 ")

    def test_brute_matches_exact(self, tmp_path):
        for i, g in enumerate(random_dags(71, 10)):
            p = tmp_path / f"r{i}.gr"
            p.write_text(write_instance(g))
            a = run("solve", "--input", p, "--algo", "brute", "--minimize")[1]
            b = run("solve", "--input", p, "--algo", "exact", "--minimize")[1]
            assert solution_lines(a)[0].split()[2] == solution_lines(b)[0].split()[2]

    def test_treewidth(self, files):
        code, out = run("solve", "--input", files["two"], "--algo", "treewidth", "--td", files["td"], "--minimize")
        assert code == 0 and solution_lines(out) == ["s dagp 1 1"]

    def test_usage_errors(self, files):
        assert run("solve", "--input", files["two"], "--algo", "exact")[0] == 3
        assert run("solve", "--input", files["two"], "--algo", "treewidth")[0] == 3
        assert run("solve", "--input", files["two"], "--algo", "exact", "--budget", -1)[0] == 3
        assert run("solve", "--input", files["two"], "--algo", "magic")[0] == 3
        assert run("solve", "--input", files["dir"] / "missing.gr", "--algo", "heuristic")[0] == 3
        assert run()[0] == 3

    def test_parse_error(self, tmp_path):
        p = tmp_path / "bad.gr"
        p.write_text("p dagp 2 1\na 1 2\n")
        assert run("solve", "--input", p, "--algo", "heuristic")[0] == 3


class TestOtherCommands:
    def test_reduce_stats(self, files):
        out_path = files["dir"] / "r.gr"
        code, out = run("reduce", "--input", files["one"], "--output", out_path, "--stats")
        assert code == 0 and out.strip() == "r dagp 1 0"
        code, out = run("reduce", "--input", files["example"], "--output", out_path, "--stats")
        assert out.strip() == "r dagp 4 3"
        assert read_instance(out_path).m == 3

    def test_verify(self, files):
        sol = files["dir"] / "example.sol"
        _, out = run("solve", "--input", files["example"], "--algo", "exact", "--minimize", "--witness")
        sol.write_text(out)
        assert run("verify", "--input", files["example"], "--solution", sol)[0] == 0
        sol.write_text("s dagp 0 0\n")
        assert run("verify", "--input", files["example"], "--solution", sol)[0] == 1
        sol.write_text("s dagp 5 1\nd 6 2\n")  # valid set, wrong declared weight
        assert run("verify", "--input", files["example"], "--solution", sol)[0] == 1

    def test_gen_deterministic(self, files, monkeypatch):
        d = files["dir"]
        run("gen", "pa", "--n", 60, "--seed", 4, "--output", d / "a.gr")
        run("gen", "pa", "--n", 60, "--seed", 4, "--output", d / "b.gr")
        assert (d / "a.gr").read_text() == (d / "b.gr").read_text()
        monkeypatch.setenv("DAGPART_SEED", "4")
        run("gen", "pa", "--n", 60, "--output", d / "c.gr")
        assert (d / "c.gr").read_text() == (d / "a.gr").read_text()
        monkeypatch.setenv("DAGPART_SEED", "oops")
        assert run("gen", "pa", "--n", 60, "--output", d / "e.gr")[0] == 3

    def test_gen_embedded_and_unitize(self, files):
        d = files["dir"]
        code, _ = run("gen", "embedded", "--components", 3, "--vertices", 20, "--outdegree", 2,
                      "--k", 3, "--seed", 1, "--output", d / "e.gr", "--embedded", d / "e.sol")
        assert code == 0
        assert run("verify", "--input", d / "e.gr", "--solution", d / "e.sol")[0] == 0
        run("gen", "unitize", "--input", files["two"], "--output", d / "u.gr")
        assert set(read_instance(d / "u.gr").weights) == {1}


class TestBench:
    def test_empty_suite(self, tmp_path):
        suite = tmp_path / "s.json"
        suite.write_text("[]")
        out = tmp_path / "o.csv"
        assert run("bench", "--suite", suite, "--csv", out)[0] == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# ") and "v1" in lines[0]
        assert lines[1:] == ["instance,n,m,red_n,red_m,algo,k,weight,status,time_ms,nodes"]

    def test_rows_and_jobs(self, files, tmp_path):
        suite = tmp_path / "s.json"
        suite.write_text(json.dumps([
            {"name": "emb", "generate": {"kind": "embedded", "components": 4,
             "vertices_per_component": 60, "outdegree": 3, "k": 5, "seed": 3},
             "algorithms": ["exact-interleaved", "heuristic"], "budgets": [5, None]},
            {"name": "two", "instance": str(files["two"]), "algorithms": ["exact", "brute"], "budgets": [0]},
            {"name": "pa", "generate": {"kind": "pa", "c": 2, "n": 30, "d": 2, "seed": 1},
             "algorithms": ["exact-dr"]},
        ]))
        rows = {}
        for jobs in (1, 3):
            out = tmp_path / f"o{jobs}.csv"
            assert run("bench", "--suite", suite, "--csv", out, "--jobs", jobs)[0] == 0
            with open(out) as fh:
                fh.readline()
                rows[jobs] = list(csv.DictReader(fh))
        assert len(rows[1]) == 7
        strip = lambda rs: [{k: v for k, v in r.items() if k != "time_ms"} for r in rs]
        assert strip(rows[1]) == strip(rows[3])
        first = rows[1][0]
        assert first["status"] == "yes" and int(first["weight"]) <= 5
        assert int(first["red_m"]) <= int(first["m"])
        assert [r["weight"] for r in rows[1] if r["instance"] == "two"] == ["NO", "NO"]

    @pytest.mark.parametrize("text", ["{", "{}", '[{"name": "x"}]',
                                      '[{"instance": "a", "algorithms": ["nope"]}]'])
    def test_bad_suite(self, tmp_path, text):
        suite = tmp_path / "s.json"
        suite.write_text(text)
        assert run("bench", "--suite", suite, "--csv", tmp_path / "o.csv")[0] == 3


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "dagpart", "solve", "--input", str(files["one"]), "--algo", "heuristic"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "s dagp 0 0" in proc.stdout
