import json

import numpy as np
import pytest

from fracwiener.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_VERIFY, SEED_ENV, main
from fracwiener.output import fmt, read_csv, read_path_values, write_csv


def run(*argv):
    return main([str(a) for a in argv])


def test_simulate_row_count(tmp_path):
    rc = run("simulate", "--seed", 42, "--steps", 256, "--dt", "3.90625e-3", "--mu0", 30,
             "--scheme", "sqrtrep", "-o", tmp_path)
    assert rc == EXIT_OK
    lines = (tmp_path / "simulate_sqrtrep.csv").read_text().splitlines()
    assert len(lines) == 257
    assert lines[0] == "step,t,W,Re(X),Im(X),|dX|,recovered_increment,reference_increment"


def test_simulate_all_schemes_recover(tmp_path):
    assert run("simulate", "--seed", 1, "-o", tmp_path) == EXIT_OK
    for name, tol in [("directpower", 1e-10), ("sqrtrep", 1e-4), ("clifford", 1e-4)]:
        d = read_csv(tmp_path / f"simulate_{name}.csv")
        assert np.max(np.abs(d["recovered_increment"] - d["reference_increment"])) <= tol


def test_simulate_is_byte_identical(tmp_path):
    for sub in ("a", "b"):
        assert run("simulate", "--seed", 5, "--steps", 64, "-o", tmp_path / sub) == EXIT_OK
    for name in ("directpower", "sqrtrep", "clifford"):
        assert (tmp_path / "a" / f"simulate_{name}.csv").read_bytes() == \
            (tmp_path / "b" / f"simulate_{name}.csv").read_bytes()


def test_simulate_json(tmp_path):
    assert run("simulate", "--steps", 8, "--format", "json", "--scheme", "directpower",
               "-o", tmp_path) == EXIT_OK
    doc = json.loads((tmp_path / "simulate_directpower.json").read_text())
    assert len(doc["series"]["W"]) == 8 and doc["config"]["steps"] == 8


@pytest.mark.parametrize("argv", [
    ("simulate", "--alpha", 3),
    ("ensemble", "--mu0", 0.4),
    ("simulate", "--steps", 0),
    ("simulate", "--scheme", "nope"),
    ("simulate", "--pair", "2,2"),
    ("ensemble", "--paths", 0),
])
def test_invalid_arguments(argv, tmp_path, capsys):
    assert run(*argv, "-o", tmp_path) == EXIT_INVALID


def test_ensemble_summary_schema(tmp_path):
    assert run("ensemble", "--paths", 1000, "--seed", 7, "-o", tmp_path) == EXIT_OK
    doc = json.loads((tmp_path / "ensemble_summary.json").read_text())
    assert {"config", "mean_brownian", "schemes", "residuals", "jump_coincidence_max_abs_err"} <= set(doc)
    assert set(doc["residuals"]) == {"sgn", "dw2_minus_dt", "dw_dt", "dw"}
    for entry in doc["schemes"].values():
        assert {"mean_recovered_cumsum", "coincidence_max_abs_err"} <= set(entry)
    assert doc["schemes"]["sqrtrep"]["coincidence_max_abs_err"] <= 1e-4
    series = read_csv(tmp_path / "ensemble_series.csv")
    assert np.array_equal(series["mean_brownian"], doc["mean_brownian"])
    assert (tmp_path / "profile.csv").exists()


def test_verify_default_passes(capsys):
    assert run("verify") == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 10


def test_verify_coarse_grid(capsys):
    assert run("verify", "--mu0", 0.6, "--dt", 0.25, "--steps", 16, "--paths", 200) == EXIT_OK


def test_verify_path_file(tmp_path, capsys):
    run("simulate", "--scheme", "directpower", "-o", tmp_path)
    assert run("verify", "--path-file", tmp_path / "simulate_directpower.csv", "--paths", 0) == EXIT_OK
    bad = tmp_path / "bad.csv"
    bad.write_text("W\n0.1\nnot-a-number\n")
    assert run("verify", "--path-file", bad) == EXIT_INVALID
    assert "FAIL path-file" in capsys.readouterr().out
    assert run("verify", "--path-file", tmp_path / "missing.csv") == EXIT_IO


def test_verify_reports_failure(monkeypatch, capsys):
    from fracwiener import verify

    monkeypatch.setattr(verify, "check_phi_laws", lambda: verify.Check("phi_squared_equals_sign", False))
    assert run("verify", "--paths", 0) == EXIT_VERIFY
    assert "FAIL phi_squared_equals_sign" in capsys.readouterr().out


def test_io_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("simulate", "--steps", 4, "-o", blocker / "sub") == EXIT_IO


def test_seed_env_and_config(tmp_path, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "5")
    run("simulate", "--steps", 16, "--scheme", "sqrtrep", "-o", tmp_path / "env")
    monkeypatch.delenv(SEED_ENV)
    run("simulate", "--steps", 16, "--scheme", "sqrtrep", "--seed", 5, "-o", tmp_path / "flag")
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 5, "steps": 16, "schemes": ["sqrtrep"]}))
    run("simulate", "--config", cfg, "-o", tmp_path / "cfg")
    ref = (tmp_path / "flag" / "simulate_sqrtrep.csv").read_bytes()
    assert (tmp_path / "env" / "simulate_sqrtrep.csv").read_bytes() == ref
    assert (tmp_path / "cfg" / "simulate_sqrtrep.csv").read_bytes() == ref
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("simulate", "--config", cfg) == EXIT_INVALID


def test_seventeen_digit_roundtrip(tmp_path, rng):
    vals = rng.normal(size=500) * 10.0 ** rng.integers(-300, 300, 500)
    assert all(float(fmt(v)) == v for v in vals)
    write_csv(tmp_path / "x.csv", {"W": vals})
    assert read_path_values(tmp_path / "x.csv").tobytes() == vals.tobytes()
