import json

import numpy as np
import pytest

from msdiv.cli import main
from msdiv.distance import DistanceMatrix, save_matrix
from msdiv.local_search_matroid import default_iterations


@pytest.fixture
def pts(tmp_path, rng):
    p = tmp_path / "pts.csv"
    rows = rng.normal(size=(8, 2))
    p.write_text("id,x1,x2\n" + "".join(f"p{i},{x:.6f},{y:.6f}\n" for i, (x, y) in enumerate(rows)))
    return p


def run_report(tmp_path, argv):
    out = tmp_path / "report.json"
    assert main(["run", *argv, "--report", str(out)]) == 0
    return json.loads(out.read_text())


def test_local_search_run(tmp_path, pts):
    rep = run_report(tmp_path, ["--input", str(pts), "--distance", "euclidean", "--constraint", "uniform",
                                "--k", "3", "--algorithm", "local-search", "--compare-oracle"])
    assert rep["parameters"]["ell"] == default_iterations(3)
    assert len(rep["selected"]) == 3 and all(s.startswith("p") for s in rep["selected"])
    assert rep["certified_bound"] == pytest.approx((1 - (2 / 3) ** default_iterations(3)) * (1 - 4 / 3))
    ratio = rep["oracle"]["ratio"]
    assert rep["certified_bound"] - 1e-9 <= ratio <= 1 + 1e-9


def test_brute_force_run(tmp_path, pts):
    rep = run_report(tmp_path, ["--input", str(pts), "--k", "4", "--algorithm", "brute-force", "--compare-oracle"])
    assert rep["oracle"]["ratio"] == pytest.approx(1.0)
    assert rep["values"]["d"] == pytest.approx(rep["oracle"]["opt_value"])


def test_intersection_epsilon(tmp_path, pts):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "intersection",
                               "m1": {"kind": "partition", "blocks": [["p0", "p1", "p2", "p3"], ["p4", "p5", "p6", "p7"]],
                                      "capacities": [2, 2]},
                               "m2": {"kind": "uniform", "k": 3}}))
    rep = run_report(tmp_path, ["--input", str(pts), "--constraint", str(cfg),
                                "--algorithm", "local-search-intersection", "--epsilon", "0.3"])
    assert rep["schedule"]["p"] == 41 and rep["schedule"]["mode"] == "enumerate"
    assert rep["parameters"]["mode"] == "enumerate"
    rep = run_report(tmp_path, ["--input", str(pts), "--constraint", str(cfg),
                                "--algorithm", "local-search-intersection", "--p", "2", "--epsilon", "0.3"])
    assert rep["parameters"]["p"] == 2 and rep["parameters"]["ell"] == rep["schedule"]["ell"]
    assert rep["certified_bound"] is None and rep["warnings"]


def test_greedy_and_matrix(tmp_path):
    m = tmp_path / "m.txt"
    save_matrix(DistanceMatrix(np.array([[0, 1, 3], [1, 0, 2], [3, 2, 0]], dtype=float)), m)
    rep = run_report(tmp_path, ["--matrix", str(m), "--k", "2", "--algorithm", "greedy"])
    assert rep["selected"] == ["0", "2"] and rep["instance"]["kernel"] == "precomputed"


def test_combined_run(tmp_path, pts):
    obj = tmp_path / "o.json"
    obj.write_text(json.dumps({"kind": "linear", "weights": {"p0": 5, "p3": 1}}))
    rep = run_report(tmp_path, ["--input", str(pts), "--k", "3", "--algorithm", "combined",
                                "--objective", str(obj), "--compare-oracle"])
    assert rep["parameters"]["potential"] == "linear_exact"
    assert rep["values"]["g"] == pytest.approx(rep["values"]["d"] + rep["values"]["f"])
    assert rep["oracle"]["ratio"] >= rep["oracle"]["instance_bound"] - 1e-9
    cov = tmp_path / "cov.json"
    cov.write_text(json.dumps({"kind": "coverage", "types": [["p0", "p1"], ["p2"]]}))
    rep = run_report(tmp_path, ["--input", str(pts), "--k", "3", "--algorithm", "combined", "--objective", str(cov)])
    assert rep["parameters"]["potential"] == "oblivious"


def test_deterministic(tmp_path, pts):
    argv = ["run", "--input", str(pts), "--k", "3", "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--report", str(a)]) == 0
    assert main(argv + ["--report", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_bad_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,x\na,1\nb,zz\n")
    assert main(["run", "--input", str(bad), "--k", "1"]) == 1
    assert "line 3" in capsys.readouterr().err
    cfg = tmp_path / "c.json"
    cfg.write_text('{"kind": "partition",\n "blocks": [["a"]], }')
    good = tmp_path / "good.csv"
    good.write_text("id,x\na,1\nb,2\n")
    assert main(["run", "--input", str(good), "--constraint", str(cfg)]) == 1
    assert "line 2" in capsys.readouterr().err
    cfg.write_text('{"kind": "partition", "blocks": [["nope"]], "capacities": [1]}')
    assert main(["run", "--input", str(good), "--constraint", str(cfg)]) == 1
    assert main(["run", "--input", str(good)]) == 1


def test_verify_small(capsys):
    assert main(["verify", "--trials", "100", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 8


def test_verify_zero_trials(capsys):
    assert main(["verify", "--trials", "0"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_injected_matrix(tmp_path, capsys):
    M = np.ones((4, 4))
    np.fill_diagonal(M, 0)
    M[0, 1] = M[1, 0] = M[2, 3] = M[3, 2] = 3
    m = tmp_path / "m.txt"
    save_matrix(DistanceMatrix(M), m)
    replay = tmp_path / "replay.json"
    code = main(["verify", "--suite", "set_inequality", "--matrix", str(m), "--trials", "10",
                 "--replay-out", str(replay)])
    assert code == 2
    failing = json.loads(replay.read_text())
    assert failing[0]["suite"] == "set_inequality"
    assert failing[0]["instance"]["A"] == [0, 1] and failing[0]["instance"]["B"] == [2, 3]


def test_bench_cli(capsys):
    assert main(["bench", "--sizes", "40,80", "--k", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "n,k,ell,distance_evals,oracle_calls,millis"
    assert len(lines) == 3
