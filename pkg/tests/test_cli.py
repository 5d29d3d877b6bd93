import json
import subprocess
import sys

import pytest

from irdp import classic
from irdp.cli import EXIT_INVALID, EXIT_OK, EXIT_RUNTIME, main
from irdp.encode import SparsePolynomial
from irdp.model import load_file, save_file, to_document

OPT = 4000 / 2187


@pytest.fixture
def driver_file(tmp_path):
    path = tmp_path / "driver.json"
    save_file(classic.absentminded_driver(), path)
    return str(path)


def test_generate(tmp_path, capsys):
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps({"max_sim_rounds": 2, "good_payoff": [1.0], "bad_payoff": [10.0]}))
    out = str(tmp_path / "sim.problem.json")
    assert main(["generate", "--family", "simulation", "--config", str(cfg), "--seed", "3", "--out", out]) == EXIT_OK
    assert len(load_file(out).nodes) == 15
    stats = json.loads(open(out + ".stats.json").read())
    assert stats["recall_class"] == "Absentminded" and stats["decision"] == 5
    assert "15 nodes" in capsys.readouterr().out


def test_generate_defaults(tmp_path):
    out = str(tmp_path / "r.json")
    assert main(["generate", "--family", "random", "--seed", "1", "--out", out]) == EXIT_OK
    assert load_file(out).nodes


def test_generate_bad_config(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"scenarios": 0}))
    assert main(["generate", "--family", "simulation", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_INVALID
    cfg.write_text(json.dumps({"colour": "red"}))
    assert main(["generate", "--family", "simulation", "--config", str(cfg), "--out", str(tmp_path / "o")]) == EXIT_INVALID


def test_solve(driver_file, tmp_path, capsys):
    trace = tmp_path / "t.jsonl"
    strat = tmp_path / "s.json"
    code = main(["solve", "--problem", driver_file, "--alg", "PGD", "--eta", "0.1", "--seed", "0",
                 "--trace", str(trace), "--strategy-out", str(strat)])
    assert code == EXIT_OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["reason"] == "GapReached"
    assert summary["value"] == pytest.approx(OPT, abs=1e-4)
    lines = trace.read_text().splitlines()
    assert json.loads(lines[0])["t"] == 0
    assert json.loads(strat.read_text())[0][0] == pytest.approx(20 / 27, abs=1e-4)


def test_solve_parameter_errors(driver_file):
    assert main(["solve", "--problem", driver_file, "--alg", "RM", "--eta", "0.1"]) == EXIT_INVALID
    assert main(["solve", "--problem", driver_file, "--alg", "PGD", "--beta1", "0.9"]) == EXIT_INVALID
    assert main(["solve", "--problem", driver_file, "--alg", "PGD", "--gap-tol", "0"]) == EXIT_INVALID


def test_bad_problem_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert main(["inspect", "--problem", str(bad)]) == EXIT_INVALID
    doc = to_document(classic.hidden_coin())
    doc["nodes"][0]["outcomes"][0][1] = 0.4
    bad.write_text(json.dumps(doc))
    assert main(["inspect", "--problem", str(bad)]) == EXIT_INVALID


def test_runtime_error(driver_file, tmp_path):
    # missing output directory is an I/O failure, not invalid input
    code = main(["solve", "--problem", driver_file, "--alg", "RM", "--trace", str(tmp_path / "no" / "t.jsonl")])
    assert code == EXIT_RUNTIME
    assert main(["inspect", "--problem", str(tmp_path / "missing.json")]) == EXIT_RUNTIME


def test_inspect(driver_file, capsys):
    assert main(["inspect", "--problem", driver_file, "--uniform"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["decision"] == 3 and doc["recall_class"] == "Absentminded"
    assert doc["uniform"]["value"] == pytest.approx(1.375)


def test_oracle(driver_file, capsys):
    assert main(["oracle", "--problem", driver_file, "--method", "pure"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == 1.0
    assert main(["oracle", "--problem", driver_file, "--method", "grid", "--resolution", "2187"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(OPT, abs=1e-9)


def test_encode_both_ways(tmp_path):
    poly = SparsePolynomial.hypercube(["x", "y", "z"], [(2.0, {"x": 2, "y": 1}), (-3.0, {"x": 1, "y": 1, "z": 1})])
    pj = tmp_path / "p.json"
    pj.write_text(json.dumps(poly.to_json()))
    prob = tmp_path / "prob.json"
    assert main(["encode", "--poly", str(pj), "--out", str(prob)]) == EXIT_OK
    assert {n.payoff for n in load_file(prob).nodes if n.kind == "terminal"} == {0.0, 4.0, -6.0}
    back = tmp_path / "back.json"
    assert main(["encode", "--problem", str(prob), "--out", str(back)]) == EXIT_OK
    assert len(json.loads(back.read_text())["monomials"]) == 2
    assert main(["encode", "--problem", str(prob), "--out", str(back), "--cap", "2"]) == EXIT_INVALID


def test_sweep(tmp_path, driver_file, capsys):
    exp = tmp_path / "exp.json"
    exp.write_text(json.dumps({
        "instances": [{"name": "driver", "path": driver_file}],
        "roster": ["PGD", "RMPlus"],
        "grids": {"PGD": [{"learning_rate": 0.1}]},
        "num_inits": 2,
    }))
    out = tmp_path / "out"
    assert main(["sweep", "--experiment", str(exp), "--out-dir", str(out), "--serial"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("instance,PGD value")
    assert (out / "values.csv").exists() and (out / "aggregate.csv").exists()
    exp.write_text(json.dumps({"instances": [{"name": "d", "path": driver_file}], "num_inits": 0}))
    assert main(["sweep", "--experiment", str(exp), "--out-dir", str(out)]) == EXIT_INVALID


def test_module_entry_point(driver_file):
    r = subprocess.run([sys.executable, "-m", "irdp", "inspect", "--problem", driver_file], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["infosets"] == 1
    r = subprocess.run([sys.executable, "-m", "irdp", "solve"], capture_output=True, text=True)
    assert r.returncode == 2  # argparse usage error
