import csv
import io
import json
import subprocess
import sys

import pytest

from purepairs.cli import CSV_COLUMNS, experiment_rows, main, trial_seed
from purepairs.generators import engineered_pattern_host, theta_pattern
from purepairs.graph import complete_bipartite, cycle_graph, path_graph, petersen_graph, read_graph
from purepairs.oracles import fox_bound, is_induced_cycle


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_detect_hole_on_c5(capsys, tmp_graph_file):
    code, out, _ = run(capsys, "detect", tmp_graph_file(cycle_graph(5)), "--hole", 5)
    assert code == 0 and out.strip() == "hole 5: witness 0 1 2 3 4"


def test_detect_witness_revalidates(capsys, tmp_graph_file):
    g = petersen_graph()
    code, out, _ = run(capsys, "detect", tmp_graph_file(g), "--hole", 6)
    seq = [int(x) for x in out.split("witness")[1].split()]
    assert code == 0 and is_induced_cycle(g, seq)
    code, out, _ = run(capsys, "detect", tmp_graph_file(g), "--hole", 4)
    assert code == 0 and "verified none" in out


def test_detect_other_flags(capsys, tmp_graph_file):
    path = tmp_graph_file(cycle_graph(9))
    assert run(capsys, "detect", path, "--branch-length")[1].strip() == "branch-length: 9"
    assert run(capsys, "detect", tmp_graph_file(path_graph(4), "p.txt"), "--branch-length")[1].strip() == \
        "branch-length: inf"
    assert run(capsys, "detect", path, "--sparse", 0.5)[1].strip() == "sparse: true"
    code, out, _ = run(capsys, "detect", path, "--coherent", 2, 2)
    assert code == 0 and out.startswith("coherent: false")
    code, out, _ = run(capsys, "detect", path, "--antihole", 5)
    assert code == 0 and "verified none" in out


def test_detect_needs_exactly_one_query(capsys, tmp_graph_file):
    path = tmp_graph_file(cycle_graph(5))
    assert run(capsys, "detect", path)[0] == 1
    assert run(capsys, "detect", path, "--hole", 5, "--branch-length")[0] == 1


def test_detect_budget_exhaustion(capsys, tmp_graph_file):
    from purepairs.generators import gnp
    code, _, err = run(capsys, "detect", tmp_graph_file(gnp(30, 0.3, 1)), "--hole", 8, "--budget", 3)
    assert code in (0, 3)
    if code == 3:
        assert "budget" in err


def test_check_structure(capsys, tmp_path, tmp_graph_file):
    s = tmp_path / "lv.txt"
    s.write_text("levelling\n0\n1\n2\n3\n")
    code, out, _ = run(capsys, "check-structure", tmp_graph_file(path_graph(4)), s)
    assert code == 0 and "ok" in out
    code, out, _ = run(capsys, "check-structure", tmp_graph_file(cycle_graph(4), "c4.txt"), s)
    assert code == 2


def test_bad_input_exits_one(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n2 0\n")
    code, _, err = run(capsys, "detect", bad, "--hole", 4)
    assert code == 1 and err.startswith("error")
    assert run(capsys, "detect", tmp_path / "missing.txt", "--hole", 4)[0] == 1


def test_gen_round_trip(capsys, tmp_path):
    out = tmp_path / "g.txt"
    assert run(capsys, "gen", "--family", "gnp", "--n", 12, "--p", 0.3, "--seed", 5, "--out", out)[0] == 0
    from purepairs.generators import gnp
    assert read_graph(out) == gnp(12, 0.3, 5)
    code, text, _ = run(capsys, "gen", "--family", "comparability", "--n", 6, "--k", 1)
    assert code == 0 and text.splitlines()[0] == "6 15"


def test_gen_fixture_with_levellings(capsys, tmp_path):
    spec = tmp_path / "spec.txt"
    spec.write_text("s=2\nt=2\nwidth=3\n")
    out, prefix = tmp_path / "f.txt", str(tmp_path / "lv")
    assert run(capsys, "gen", "--family", "fixture", "--spec", spec, "--levellings", prefix, "--out", out)[0] == 0
    for k in (1, 2):
        code, text, _ = run(capsys, "check-structure", out, f"{prefix}.{k}")
        assert code == 0


def test_find_pure_pair(capsys, tmp_graph_file):
    code, out, _ = run(capsys, "find-pure-pair", tmp_graph_file(complete_bipartite(3, 4)))
    fields = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert code == 0 and fields["objective"] == "3" and fields["kind"] == "complete"
    assert float(fields["fox_bound"]) == pytest.approx(fox_bound(7), abs=1e-4)


def test_pipeline_find(capsys, tmp_graph_file):
    g, _ = engineered_pattern_host(theta_pattern(5), seed=1)
    code, out, _ = run(capsys, "pipeline", tmp_graph_file(g), "--pattern", "theta5", "--driver", "find")
    rep = json.loads(out)
    assert code == 0 and rep["outcome"] == "success" and rep["checks"]["embedding"] is True


def test_pipeline_reduce(capsys, tmp_graph_file):
    from purepairs.generators import gnp
    code, out, _ = run(capsys, "pipeline", tmp_graph_file(gnp(40, 0.05, 2)), "--pattern", "cycle9", "--c", 0.5)
    rep = json.loads(out)
    assert code == 0 and rep["certificate"]["kind"] in ("embedding", "pure_pair")


def test_pipeline_unknown_pattern(capsys, tmp_graph_file):
    assert run(capsys, "pipeline", tmp_graph_file(cycle_graph(5)), "--pattern", "nope")[0] == 1


def test_experiment_csv(capsys):
    code, out, _ = run(capsys, "experiment", "--sizes", "40,80", "--trials", 20, "--seed", 3)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 40
    assert tuple(rows[0]) == CSV_COLUMNS
    assert [(int(r["n"]), int(r["trial"])) for r in rows] == sorted((int(r["n"]), int(r["trial"])) for r in rows)
    assert int(rows[5]["seed"]) == trial_seed(3, 40, 5)


def test_experiment_is_reproducible():
    a = experiment_rows("comparability", [30], 3, 0.5, 0.1, 9)
    b = experiment_rows("comparability", [30], 3, 0.5, 0.1, 9)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rows]
    assert strip(a) == strip(b)


def test_experiment_bad_sizes(capsys):
    assert run(capsys, "experiment", "--sizes", "4x")[0] == 1


def test_module_entry_point(tmp_graph_file):
    out = subprocess.run([sys.executable, "-m", "purepairs", "detect", tmp_graph_file(cycle_graph(5)), "--hole", "5"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "witness" in out.stdout
