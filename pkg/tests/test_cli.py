"""Command-line entry point: outputs, artifacts, determinism, exit codes."""

from __future__ import annotations

import csv
import json

import pytest

from evosis import ConfigurationError, ConvergenceError, config_to_dict, load_preset
from evosis import cli
from evosis.cli import _parse_values, main


def _read(path):
    return path.read_text(encoding="utf-8")


# ---- argument handling ----

def test_no_command_is_a_usage_error(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_preset_is_a_usage_error(capsys):
    assert main(["r0", "--preset", "example9-z"]) == 1
    assert "invalid choice" in capsys.readouterr().err


def test_parse_values_accepts_commas_and_whitespace():
    assert _parse_values("0.1, 0.2,0.3") == (0.1, 0.2, 0.3)
    assert _parse_values("4") == (4.0,)


def test_parse_values_rejects_garbage():
    with pytest.raises(ConfigurationError, match="could not parse"):
        _parse_values("0.1,abc")
    with pytest.raises(ConfigurationError, match="at least one"):
        _parse_values("  ,  ")


# ---- r0 ----

def test_r0_command_prints_value_and_writes_identical_artifacts(tmp_path, capsys):
    args = ["r0", "--preset", "example2-fixed", "--grid", "24", "--steps", "96"]
    first = tmp_path / "first"
    second = tmp_path / "second"

    assert main(args + ["--out", str(first)]) == 0
    out = capsys.readouterr().out
    assert "R0 = 1.400" in out
    assert "sandwich bracket" in out

    assert main(args + ["--out", str(second)]) == 0
    capsys.readouterr()
    for name in ("manifest.json", "r0.json", "eigenfunction.csv"):
        assert _read(first / name) == _read(second / name)

    doc = json.loads(_read(first / "r0.json"))
    assert doc["r0"] == pytest.approx(1.4, abs=1e-6)
    assert doc["bracket"][0] <= doc["r0"] <= doc["bracket"][1]
    manifest = json.loads(_read(first / "manifest.json"))
    assert manifest["command"] == "r0"
    assert manifest["config"]["grid_points"] == 24


def test_r0_strict_passes_on_clean_run():
    assert main(["r0", "--preset", "example2-fixed", "--grid", "24",
                 "--steps", "96", "--strict"]) == 0


# ---- bounds ----

def test_bounds_command_reports_coefficient_extremes(tmp_path, capsys):
    out_dir = tmp_path / "bounds"
    assert main(["bounds", "--preset", "example4-a", "--out", str(out_dir)]) == 0
    text = capsys.readouterr().out
    assert "lower bound" in text and "upper bound" in text
    doc = json.loads(_read(out_dir / "bounds.json"))
    assert doc["min_beta_integral"] == pytest.approx(1.067882804158198, abs=1e-9)
    assert doc["max_gamma_integral"] == pytest.approx(3.385713018086869, abs=1e-9)
    assert doc["lower"] <= doc["upper"]


# ---- dfe ----

def test_dfe_command_emits_orbit_artifacts(tmp_path, capsys):
    out_dir = tmp_path / "dfe"
    assert main(["dfe", "--preset", "example1-evolving", "--grid", "64",
                 "--steps", "250", "--out", str(out_dir)]) == 0
    text = capsys.readouterr().out
    assert "converged" in text
    doc = json.loads(_read(out_dir / "dfe.json"))
    assert doc["residual"] <= 1e-8
    with open(out_dir / "dfe_orbit.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert set(rows[0]) == {"t", "y", "S"}
    assert all(float(row["S"]) > 0 for row in rows)
    compile(_read(out_dir / "plot_dfe_orbit.py"), "plot_dfe_orbit.py", "exec")


# ---- simulate ----

def test_simulate_command_writes_period_table_and_snapshot(tmp_path, capsys):
    out_dir = tmp_path / "sim"
    assert main(["simulate", "--preset", "example4-a", "--grid", "48",
                 "--steps", "200", "--periods", "6", "--out", str(out_dir)]) == 0
    assert "ran 6 periods" in capsys.readouterr().out
    with open(out_dir / "periods.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 6
    assert set(rows[0]) == {"period", "sup_I", "l1_I", "s_closure_defect"}
    with open(out_dir / "timeseries.csv", newline="") as handle:
        header = next(csv.reader(handle))
    assert header == ["t", "y", "S", "I"]
    compile(_read(out_dir / "plot_periods.py"), "plot_periods.py", "exec")
    compile(_read(out_dir / "plot_timeseries.py"), "plot_timeseries.py", "exec")


# ---- sweep ----

def test_sweep_command_reports_monotone_verdict(tmp_path, capsys):
    out_dir = tmp_path / "sweep"
    assert main(["sweep", "--preset", "example4-b", "--param", "d_I",
                 "--values", "0.05,0.1,0.2", "--grid", "48", "--steps", "160",
                 "--out", str(out_dir), "--strict"]) == 0
    assert "verdict: strictly-decreasing" in capsys.readouterr().out
    doc = json.loads(_read(out_dir / "sweep.json"))
    assert doc["r0_values"] == sorted(doc["r0_values"], reverse=True)
    compile(_read(out_dir / "plot_sweep.py"), "plot_sweep.py", "exec")


# ---- limits ----

def test_limits_strict_flags_a_truncated_sequence(tmp_path, capsys, designed_config):
    config_path = tmp_path / "standard.json"
    config_path.write_text(json.dumps(config_to_dict(designed_config())),
                           encoding="utf-8")
    args = ["limits", "--config", str(config_path), "--kind", "small-diffusivity",
            "--values", "0.1,0.05", "--grid", "64", "--steps", "192"]
    assert main(args) == 0
    assert "FLAGGED" in capsys.readouterr().out
    assert main(args + ["--strict"]) == 3
    captured = capsys.readouterr()
    assert "limit gap checks failed" in captured.err


# ---- reproduce ----

def test_reproduce_matches_every_published_row(tmp_path, capsys):
    out_dir = tmp_path / "repro"
    assert main(["reproduce", "--out", str(out_dir)]) == 0
    text = capsys.readouterr().out
    assert "14/14 rows within 0.001" in text
    assert "FAIL" not in text
    with open(out_dir / "reproduction.csv", newline="") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 14
    assert all(float(row["abs_diff"]) <= 1e-3 for row in rows)


# ---- error exits ----

def test_missing_config_file_exits_with_config_error(tmp_path, capsys):
    assert main(["r0", "--config", str(tmp_path / "no-such.json")]) == 1
    assert "config error" in capsys.readouterr().err


def test_invalid_json_exits_with_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert main(["r0", "--config", str(bad)]) == 1
    assert "config error" in capsys.readouterr().err


def test_invalid_field_reports_its_path(tmp_path, capsys):
    doc = config_to_dict(load_preset("example1-fixed"))
    doc["d_I"] = -1.0
    bad = tmp_path / "negative.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["r0", "--config", str(bad)]) == 1
    assert "config error: d_I" in capsys.readouterr().err


def test_solver_failure_exits_with_solver_code(monkeypatch, capsys):
    def explode(config):
        raise ConvergenceError("radius bracket could not be closed")

    monkeypatch.setattr(cli, "compute_r0", explode)
    assert main(["r0", "--preset", "example1-fixed", "--grid", "16",
                 "--steps", "32"]) == 2
    assert "solver failure" in capsys.readouterr().err
