"""Tests for the command-line interface: reports, schemas, exit codes,
determinism."""

import json
import subprocess
import sys

import jsonschema
import pytest

from schur_lattice.cli import (_load_schema, build_parser, main, run_case,
                               sweep_cases)


def run_main(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# small subcommands
# ---------------------------------------------------------------------------

def test_hooks_text(capsys):
    code, out, _ = run_main(capsys, ["hooks", "--lambda", "2,1", "--p", "2"])
    assert code == 0
    assert out.splitlines() == ["3 1", "1", "core(p=2): true"]


def test_hooks_json(capsys):
    code, out, _ = run_main(
        capsys, ["hooks", "--lambda", "2", "--p", "2", "--json"])
    assert code == 0
    got = json.loads(out)
    assert got == {"core": False, "hooks": [[2, 1]], "lambda": [2], "p": 2}


def test_dim(capsys):
    code, out, _ = run_main(capsys, ["dim", "--n", "3", "--lambda", "2,1"])
    assert code == 0
    assert out.strip() == "8"


def test_rho_json(capsys):
    code, out, _ = run_main(
        capsys, ["rho", "--n", "2", "--lambda", "2", "--p", "2",
                 "--matrix", "1,1;0,1", "--json"])
    assert code == 0
    got = json.loads(out)
    assert got["rho"] == [["1", "2", "1"], ["0", "1", "1"], ["0", "0", "1"]]


def test_rho_laurent_matrix_parsing(capsys):
    code, out, _ = run_main(
        capsys, ["rho", "--n", "2", "--lambda", "1", "--field", "laurent",
                 "--q", "2", "--matrix", "t,1;0,1+t", "--json"])
    assert code == 0
    got = json.loads(out)
    assert got["rho"][0][0] == "t"
    assert got["rho"][1][1] == "1 + t"


# ---------------------------------------------------------------------------
# case reports
# ---------------------------------------------------------------------------

def test_order_report_schema_and_content(capsys):
    code, out, err = run_main(
        capsys, ["order", "--n", "2", "--lambda", "2", "--p", "2"])
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, _load_schema("report.schema.json"))
    assert report["order"]["rank"] == 9
    assert report["order"]["divisors"] == [0] * 7 + [1, 1]
    assert report["order"]["congruence_level"] == 1
    assert report["core"] is False
    assert report["timings"] is None
    # progress stays on stderr
    assert "computing order" in err


def test_fix_report_frozen(capsys):
    code, out, _ = run_main(
        capsys, ["fix", "--n", "2", "--lambda", "2", "--p", "2"])
    assert code == 0
    report = json.loads(out)
    fix = report["fix"]
    assert fix["agreement"] is True
    assert fix["polytrope"]["u_vectors"] == [[0, 0, 0], [1, 0, 1]]
    assert fix["polytrope"]["bounded"] is True
    assert fix["bfs"]["size"] == 2
    assert report["convexity"] is True
    assert report["irreducible"] == {
        "agree": True, "spans_full": False, "subspace_count": 2}


def test_fix_laurent_inf_serialization(capsys):
    code, out, _ = run_main(
        capsys, ["fix", "--n", "2", "--lambda", "2", "--field", "laurent",
                 "--q", "2", "--trials", "8"])
    assert code == 0
    report = json.loads(out)
    assert report["order"]["full_rank"] is False
    assert report["order"]["profile"][0][1] == "inf"
    assert report["order"]["graduated"] is None
    poly = report["fix"]["polytrope"]
    assert poly["bounded"] is False
    assert poly["capped"] is True
    assert poly["u_vectors"] == [[m, 0, m] for m in range(6)]
    jsonschema.validate(report, _load_schema("report.schema.json"))


def test_timings_flag(capsys):
    code, out, _ = run_main(
        capsys, ["order", "--n", "2", "--lambda", "2", "--p", "3",
                 "--timings"])
    assert code == 0
    report = json.loads(out)
    assert report["timings"] is not None
    assert "order_s" in report["timings"]


def test_determinism_byte_identical(capsys):
    argv = ["fix", "--n", "2", "--lambda", "2", "--p", "2", "--seed", "9"]
    _, out1, _ = run_main(capsys, argv)
    _, out2, _ = run_main(capsys, argv)
    assert out1 == out2


def test_sample_report(capsys):
    code, out, _ = run_main(
        capsys, ["sample", "--n", "2", "--lambda", "2", "--p", "3",
                 "--count", "500"])
    assert code == 0
    report = json.loads(out)
    jsonschema.validate(report, _load_schema("report.schema.json"))
    assert report["gaussian"]["exact_invariant"] is True
    assert report["gaussian"]["samples"] == 500
    assert len(report["first_samples"]) == 5


# ---------------------------------------------------------------------------
# run_case API
# ---------------------------------------------------------------------------

def test_run_case_zero_module():
    report = run_case({"n": 2, "lambda": [1, 1, 1], "field": "padic", "p": 2})
    assert report["N"] == 0
    assert report["order"] is None


def test_run_case_parts_selection():
    report = run_case({"n": 2, "lambda": [2], "field": "padic", "p": 3},
                      parts=("order",))
    assert report["order"]["full_rank"] is True
    assert report["fix"] is None
    assert report["irreducible"] is None


def test_sweep_cases_grid():
    cases = sweep_cases(3, (2, 3), (2, 3))
    # partitions with <= n rows: n=2 -> 5 shapes, n=3 -> 6 shapes; 2 primes
    assert len(cases) == 22
    assert {"n": 2, "lambda": [2, 1], "field": "padic", "p": 3} in cases


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

@pytest.fixture()
def scan_config(tmp_path):
    cfg = {
        "defaults": {"seed": 0, "trials": 16},
        "cases": [
            {"n": 2, "lambda": [2], "field": "padic", "p": 2},
            {"n": 2, "lambda": [2], "field": "padic", "p": 3},
            {"n": 2, "lambda": [4], "field": "padic", "p": 2, "cap_N": 3},
        ],
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_scan_reports_and_errors(capsys, scan_config):
    code, out, _ = run_main(capsys, ["scan", scan_config])
    assert code == 0
    result = json.loads(out)
    assert len(result["cases"]) == 3
    table = result["table"]
    assert table[0]["graduated"] is True
    assert table[0]["irreducible"] is False
    assert table[1]["irreducible"] is True
    assert table[2]["error"] == "CapExceeded"


def test_scan_worker_pool_determinism(capsys, scan_config):
    _, seq, _ = run_main(capsys, ["scan", scan_config])
    _, par, _ = run_main(capsys, ["scan", scan_config, "--workers", "2"])
    assert seq == par


def test_scan_rejects_malformed_config(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cases": [{"n": 2}]}))
    code, _, err = run_main(capsys, ["scan", str(bad)])
    assert code == 2
    assert "error" in err


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_exit_invalid_input(capsys):
    code, _, err = run_main(capsys, ["order", "--n", "2", "--lambda", "2"])
    assert code == 2
    assert "error" in err


def test_exit_cap_exceeded(capsys):
    code, _, err = run_main(
        capsys, ["order", "--n", "2", "--lambda", "4", "--p", "2",
                 "--cap-N", "3"])
    assert code == 3
    assert "cap" in err


def test_console_script_installed():
    out = subprocess.run(
        [sys.executable, "-m", "schur_lattice.cli", "dim", "--n", "2",
         "--lambda", "2"],
        capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip() == "3"


def test_parser_covers_documented_subcommands():
    parser = build_parser()
    subactions = [a for a in parser._actions
                  if hasattr(a, "choices") and a.choices]
    names = set(subactions[0].choices)
    assert names == {"hooks", "dim", "rho", "order", "fix", "scan",
                     "sample", "irreducible"}
