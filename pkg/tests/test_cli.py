import json

import numpy as np
import pytest
from click.testing import CliRunner

from sparsedensity.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def test_version(runner):
    res = runner.invoke(main, ["--version"])
    assert res.exit_code == 0 and "version" in res.output


def test_estimate_writes_artifacts(runner, tmp_path):
    out = tmp_path / "e.json"
    res = runner.invoke(main, ["estimate", "--density", "f3", "--dict",
                               "hist", "--n", "64", "--seed", "2",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert "coefficients" in payload and "risk" in payload
    assert payload["meta"]["config_digest"]
    curve = (tmp_path / "e.csv").read_text().splitlines()
    assert curve[0].startswith("# sparsedensity")
    header_rows = [l for l in curve if l.startswith("#")]
    data_rows = [l for l in curve if not l.startswith("#")]
    assert data_rows[0] == "x,estimate,truth"
    assert len(data_rows) == 1 + 1024


def test_estimate_deterministic(runner, tmp_path):
    args = ["estimate", "--density", "f4", "--dict", "hist", "--n", "64",
            "--seed", "7"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_estimate_dantzig_ls_reports_both(runner, tmp_path):
    out = tmp_path / "ls.json"
    res = runner.invoke(main, ["estimate", "--density", "f3", "--dict",
                               "hist", "--n", "64", "--method", "dantzig-ls",
                               "--seed", "2", "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    assert "base_coefficients" in payload and "base_risk" in payload


def test_estimate_rejects_bad_gamma(runner):
    res = runner.invoke(main, ["estimate", "--gamma", "0"])
    assert res.exit_code == 2


def test_calibrate_csv_schema(runner, tmp_path):
    out = tmp_path / "cal.csv"
    res = runner.invoke(main, ["calibrate", "--gammas", "0.5,1.0",
                               "--j-values", "5,6", "--reps", "2",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "gamma,J,n,mean_risk,log2_mean_risk"
    assert len(lines) == 1 + 4  # one row per (gamma, J)


def test_calibrate_deterministic(runner, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["calibrate", "--gammas", "0.5,1.0", "--j-values", "5",
            "--reps", "1", "--seed", "1"]
    assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
    assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_calibrate_rejects_bad_grid(runner, tmp_path):
    res = runner.invoke(main, ["calibrate", "--gammas", "0.5,zap",
                               "--out", str(tmp_path / "c.csv")])
    assert res.exit_code == 2


def test_benchmark_single_panel(runner, tmp_path):
    res = runner.invoke(main, ["benchmark", "--n", "32", "--reps", "3",
                               "--panel", "dantzig-vs-refit",
                               "--out-dir", str(tmp_path)])
    assert res.exit_code == 0, res.output
    panel = (tmp_path / "dantzig-vs-refit.csv").read_text()
    lines = [l for l in panel.splitlines() if not l.startswith("#")]
    assert lines[0].startswith("comparison,density,method,dictionary,n,reps")
    assert len(lines) == 1 + 8  # 4 densities x 2 methods
    raw = (tmp_path / "dantzig-vs-refit-replications.csv").read_text()
    raw_lines = [l for l in raw.splitlines() if not l.startswith("#")]
    assert len(raw_lines) == 1 + 8 * 3


def test_analyze_gram_json(runner, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"gram": np.eye(4).tolist()}))
    res = runner.invoke(main, ["analyze", "--gram-json", str(path),
                               "--l-max", "3"])
    assert res.exit_code == 0, res.output
    assert "kappa1=1" in res.output and "mu1=0" in res.output


def test_analyze_requires_input(runner):
    res = runner.invoke(main, ["analyze"])
    assert res.exit_code == 2


def test_analyze_specific_pair(runner):
    res = runner.invoke(main, ["analyze", "--dict", "hist", "--n", "64",
                               "--l-max", "3", "--s", "1", "--l", "2"])
    assert res.exit_code == 0, res.output
    assert "s=1 l=2" in res.output


def test_gram_identity_report(runner):
    res = runner.invoke(main, ["gram", "--dict", "haar", "--n", "64"])
    assert res.exit_code == 0, res.output
    line = next(l for l in res.output.splitlines() if "G - I" in l)
    assert float(line.split()[-1]) < 1e-10


def test_config_file_merge_and_override(runner, tmp_path):
    cfgfile = tmp_path / "exp.ini"
    cfgfile.write_text("[estimate]\ndensity = f3\nn = 64\nseed = 9\n")
    out = tmp_path / "o.json"
    res = runner.invoke(main, ["estimate", "--config", str(cfgfile),
                               "--dict", "hist", "--density", "f4",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    payload = json.loads(out.read_text())
    # flag wins over file for density; file fills n and seed
    assert payload["config"]["density"] == "f4"
    assert payload["config"]["n"] == 64
    assert payload["config"]["seed"] == 9


def test_config_file_unknown_key_rejected(runner, tmp_path):
    cfgfile = tmp_path / "exp.ini"
    cfgfile.write_text("[estimate]\nbandwidth = 3\n")
    res = runner.invoke(main, ["estimate", "--config", str(cfgfile)])
    assert res.exit_code == 2
    assert "unknown keys" in res.output


def test_config_file_missing(runner):
    res = runner.invoke(main, ["estimate", "--config", "/nonexistent.ini"])
    assert res.exit_code == 2


def test_out_dir_env_override(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("SPARSEDENSITY_OUT_DIR", str(tmp_path))
    res = runner.invoke(main, ["calibrate", "--gammas", "1.0",
                               "--j-values", "5", "--reps", "1",
                               "--out", "cal.csv"])
    assert res.exit_code == 0, res.output
    assert (tmp_path / "cal.csv").exists()
