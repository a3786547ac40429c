import json

import pytest
from click.testing import CliRunner

from gridtau import cli
from gridtau.chain import ComplexInconsistency
from gridtau.grid import parse_grid
from gridtau.invariants import Check


@pytest.fixture
def runner():
    return CliRunner()


def test_compute_braid_json(runner):
    res = runner.invoke(cli.main, ["compute", "--braid", "2: 1 1 1", "--format", "json"])
    assert res.exit_code == 0, res.output
    data = json.loads(res.output)
    assert data["tau_top"] == 1 and data["signature"] == -2
    assert all(c["status"] == "pass" for c in data["checks"])


def test_compute_table_and_fixture(runner):
    res = runner.invoke(cli.main, ["compute", "--fixture", "figure8", "--assoc-graded", "--oracle"])
    assert res.exit_code == 0, res.output
    assert "tau_top                  0" in res.output
    assert "oracle" in res.output


def test_compute_grid_file(runner, tmp_path):
    path = tmp_path / "u.grid"
    path.write_text("n = 2\nX = 1 0\nO = 0 1\n")
    res = runner.invoke(cli.main, ["compute", "--grid", str(path), "--format", "json"])
    assert res.exit_code == 0
    assert json.loads(res.output)["tau_top"] == 0


@pytest.mark.parametrize("args", [
    ["compute"],
    ["compute", "--braid", "2: 3"],
    ["compute", "--braid", "2: 1", "--fixture", "hopf"],
    ["compute", "--fixture", "nope"],
    ["compute", "--grid", "/nonexistent.grid"],
    ["compute", "--fixture", "torus2_5", "--max-grid", "6"],
    ["convert"],
    ["convert", "--qp", "2: (1"],
])
def test_input_errors_exit_1(runner, args):
    assert runner.invoke(cli.main, args).exit_code == 1


def test_bad_grid_exits_1(runner, tmp_path):
    path = tmp_path / "bad.grid"
    path.write_text("n = 2\nX = 0 1\nO = 0 1\n")
    assert runner.invoke(cli.main, ["compute", "--grid", str(path)]).exit_code == 1


def test_internal_failure_exits_2(runner, monkeypatch):
    def boom(*a, **k):
        raise ComplexInconsistency("boundary does not square to zero")

    monkeypatch.setattr(cli, "braid_report", boom)
    res = runner.invoke(cli.main, ["compute", "--braid", "2: 1"])
    assert res.exit_code == 2


def test_verification_failure_exits_3(runner, monkeypatch):
    monkeypatch.setattr(cli, "run_suite", lambda name, cfg: [Check("ok", True), Check("bad", False, "x")])
    res = runner.invoke(cli.main, ["verify", "--suite", "fixtures"])
    assert res.exit_code == 3
    assert "FAIL  bad" in res.output and "1/2 checks passed" in res.output


def test_verify_fixtures_suite(runner):
    res = runner.invoke(cli.main, ["verify", "--suite", "fixtures", "--threads", "1"])
    assert res.exit_code == 0, res.output
    assert "FAIL" not in res.output


def test_json_identical_across_thread_counts(runner):
    outs = {runner.invoke(cli.main, ["compute", "--fixture", "torus2_5", "--format", "json",
                                     "--assoc-graded", "--threads", t]).output for t in ("1", "2", "4")}
    assert len(outs) == 1


def test_convert_matches_compute(runner):
    res = runner.invoke(cli.main, ["convert", "--qp", "3: (2|1)(|2)"])
    assert res.exit_code == 0
    grid = parse_grid(res.output)
    from gridtau.invariants import compute_report

    via_grid = compute_report(grid).invariant_summary()
    via_qp = json.loads(runner.invoke(cli.main, ["compute", "--qp", "3: (2|1)(|2)", "--format", "json"]).output)
    assert via_qp["grid_size"] == grid.size
    assert via_grid[1] == 2 * via_qp["tau_top"]


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "gridtau", "convert", "--braid", "2: 1 1 1"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.startswith("n = ")


def test_compute_repo_fixture_file(runner):
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "fixtures" / "unknot2.grid"
    data = json.loads(runner.invoke(cli.main, ["compute", "--grid", str(path), "--format", "json"]).output)
    assert data["tau_top"] == data["tau_bot"] == 0


def test_compute_qp_example(runner):
    data = json.loads(runner.invoke(cli.main, ["compute", "--qp", "2: (|1)(|1)", "--format", "json"]).output)
    assert data["tau_top"] == 1
    assert {c["name"]: c["status"] for c in data["checks"]}["quasipositive"] == "pass"
