import json
import os

import numpy as np
import pytest

from varcycle.cli import emit_benchmark_cycle, main


@pytest.fixture
def diag_config(tmp_path):
    doc = {
        "n": 3,
        "alpha": 0.1,
        "beta": 0.9,
        "a": [0.2, 0.3, 0.5],
        "b": [0.4, 0.4, 0.2],
        "noise": {"mu": [0.0] * 6, "sigma": [1.0] * 6},
        "run": {"T": 80, "seed": 11, "method": "both"},
        "output": {"path": str(tmp_path / "traj.csv"), "format": "csv"},
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return path, doc


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip().startswith("{") else None
    return code, report, captured.err


class TestDecompose:
    def test_complex_regime_reports_no_basis(self, capsys):
        code, report, _ = run_cli(
            capsys, "decompose", "--n", "2", "--alpha", "1.09804", "--beta", "0.7"
        )
        assert code == 0
        assert report["payload"]["regime"] == "complex_conjugate"
        assert report["payload"]["basis_available"] is False
        assert report["payload"]["residuals"] is None

    def test_diagonalizable_residuals_pass(self, capsys):
        code, report, _ = run_cli(
            capsys, "decompose", "--n", "3", "--alpha", "0.1", "--beta", "0.9"
        )
        assert code == 0
        res = report["payload"]["residuals"]
        assert res["passed"] is True
        assert res["mq_qj"] < 1e-12 and res["qqinv"] < 1e-12

    def test_dump_matrices_round_trip(self, capsys, tmp_path):
        out = tmp_path / "mats"
        code, report, _ = run_cli(
            capsys, "decompose", "--n", "3", "--alpha", "0.1", "--beta", "0.9",
            "--dump-matrices", out,
        )
        assert code == 0
        Q = np.loadtxt(out / "Q.csv", delimiter=",")
        Qinv = np.loadtxt(out / "Qinv.csv", delimiter=",")
        M = np.loadtxt(out / "M.csv", delimiter=",")
        # shortest round-trip decimals reproduce the computation exactly
        assert np.max(np.abs(Q @ Qinv - np.eye(6))) < 1e-10
        assert M.shape == (6, 6)


class TestSimulate:
    def test_both_methods_write_two_csvs_and_summary(self, capsys, diag_config):
        config_path, doc = diag_config
        code, report, _ = run_cli(capsys, "simulate", "--config", config_path)
        assert code == 0
        payload = report["payload"]
        assert payload["max_method_deviation_relative"] < 1e-8
        for name in ("recursive", "explicit"):
            path = payload["files"][name]
            assert os.path.exists(path)
            with open(path) as fh:
                lines = fh.read().strip().splitlines()
            assert lines[0] == "t,x_1,x_2,x_3,y_1,y_2,y_3,xbar,ybar"
            assert len(lines) == doc["run"]["T"] + 2  # header + T+1 rows

    def test_determinism_same_seed(self, capsys, tmp_path, diag_config):
        config_path, _ = diag_config
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            code, _, _ = run_cli(
                capsys, "simulate", "--config", config_path,
                "--method", "recursive", "--out", out,
            )
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_config_echo_round_trip(self, capsys, tmp_path, diag_config):
        config_path, _ = diag_config
        code, first, _ = run_cli(capsys, "simulate", "--config", config_path)
        assert code == 0
        echo_path = tmp_path / "echo.json"
        echo_path.write_text(json.dumps(first["config_echo"]))
        code, second, _ = run_cli(capsys, "simulate", "--config", echo_path)
        assert code == 0
        assert first["payload"] == second["payload"]

    def test_z0_from_csv(self, capsys, tmp_path, diag_config):
        config_path, _ = diag_config
        z0 = tmp_path / "z0.csv"
        z0.write_text(",".join(["0.5"] * 6))
        code, report, _ = run_cli(
            capsys, "simulate", "--config", config_path,
            "--method", "recursive", "--z0", f"csv:{z0}", "--out", tmp_path / "z.csv",
        )
        assert code == 0
        with open(report["payload"]["files"]["recursive"]) as fh:
            first_row = fh.read().splitlines()[1].split(",")
        assert float(first_row[1]) == 0.5

    def test_zero_noise_flag(self, capsys, tmp_path, diag_config):
        config_path, _ = diag_config
        code, report, _ = run_cli(
            capsys, "simulate", "--config", config_path, "--method", "recursive",
            "--zero-noise", "--z0", "zeros", "--out", tmp_path / "zn.csv",
        )
        assert code == 0
        data = np.loadtxt(report["payload"]["files"]["recursive"], delimiter=",", skiprows=1)
        assert np.all(data[:, 1:] == 0.0)

    def test_missing_out_is_validation_error(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"n": 2, "alpha": 0.1, "beta": 0.9,
                                   "a": [0.5, 0.5], "b": [0.5, 0.5]}))
        code, _, err = run_cli(capsys, "simulate", "--config", cfg)
        assert code == 2
        assert err.startswith("error: ConfigError:")
        assert len(err.strip().splitlines()) == 1


class TestStrictSchema:
    def test_unknown_top_level_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"n": 2, "alpha": 0.1, "beta": 0.9,
                                   "a": [0.5, 0.5], "b": [0.5, 0.5], "alhpa": 0.2}))
        code, _, err = run_cli(capsys, "decompose", "--config", cfg)
        assert code == 2
        assert "alhpa" in err

    def test_unknown_nested_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({
            "n": 2, "alpha": 0.1, "beta": 0.9, "a": [0.5, 0.5], "b": [0.5, 0.5],
            "run": {"T": 10, "sede": 1},
        }))
        code, _, err = run_cli(capsys, "decompose", "--config", cfg)
        assert code == 2
        assert "sede" in err

    def test_validation_error_exit_2(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"n": 2, "alpha": 0.0, "beta": 0.0,
                                   "a": [0.5, 0.5], "b": [0.5, 0.5]}))
        code, _, err = run_cli(capsys, "decompose", "--config", cfg)
        assert code == 2
        assert err.startswith("error: ForbiddenPair:")

    def test_failed_run_leaves_no_partial_output(self, capsys, tmp_path):
        cfg = tmp_path / "bad.json"
        out = tmp_path / "never.csv"
        cfg.write_text(json.dumps({"n": 2, "alpha": 0.1, "beta": 0.9,
                                   "a": [0.5, 0.5], "b": [0.5, 0.6]}))
        code, _, _ = run_cli(capsys, "simulate", "--config", cfg, "--out", out)
        assert code == 2
        assert not out.exists()
        assert not list(tmp_path.glob(".tmp-*"))


class TestCycleCommand:
    def test_default_run_reproduces_benchmark(self, capsys, tmp_path):
        out = tmp_path / "fig.csv"
        code, report, _ = run_cli(capsys, "cycle", "--out", out, "--analyze")
        assert code == 0
        payload = report["payload"]
        assert payload["rows"] == 701
        with open(out) as fh:
            lines = fh.read().strip().splitlines()
        assert lines[0] == "t,xbar,h"
        assert len(lines) == 702
        pred = payload["predicted_period"]
        assert abs(payload["estimated_period"] - pred) / pred < 0.10
        assert payload["prominent"] is True

    def test_same_seed_identical_files(self, capsys, tmp_path):
        outs = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for out in outs:
            code, _, _ = run_cli(capsys, "cycle", "--seed", 7, "--out", out)
            assert code == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()

    def test_short_run_downgrades_analysis_to_warning(self, capsys, tmp_path):
        out = tmp_path / "short.csv"
        code, report, err = run_cli(
            capsys, "cycle", "--T", 32, "--out", out, "--analyze"
        )
        assert code == 0
        assert out.exists()
        assert "estimated_period" not in report["payload"]
        assert report["payload"]["warnings"]
        assert "warning:" in err


class TestMoments:
    def test_report_structure(self, capsys, diag_config):
        config_path, _ = diag_config
        code, report, _ = run_cli(
            capsys, "moments", "--config", config_path,
            "--t-grid", "2,5,10", "--tau-grid", "0,1",
        )
        assert code == 0
        payload = report["payload"]
        assert payload["stationarity_gap"] > 1e-3
        assert len(payload["grid"]) == 6
        assert payload["limits"]["spectral_radius_ok"] is True
        assert payload["limits"]["covariance_discrepancy"] > 0

    def test_wrong_regime_is_validation_error(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"n": 2, "alpha": 1.09804, "beta": 0.7,
                                   "a": [0.5, 0.5], "b": [0.5, 0.5]}))
        code, _, err = run_cli(capsys, "moments", "--config", cfg)
        assert code == 2
        assert "regime" in err

    def test_dump_cov(self, capsys, tmp_path, diag_config):
        config_path, _ = diag_config
        prefix = tmp_path / "cov"
        code, _, _ = run_cli(
            capsys, "moments", "--config", config_path,
            "--t-grid", "2,3", "--tau-grid", "0", "--dump-cov", prefix,
        )
        assert code == 0
        mat = np.loadtxt(f"{prefix}_t2_tau0.csv", delimiter=",")
        assert mat.shape == (6, 6)


class TestVerify:
    def test_diagonalizable_config_passes(self, capsys, diag_config):
        config_path, _ = diag_config
        code, report, _ = run_cli(capsys, "verify", "--config", config_path)
        assert code == 0
        checks = {c["name"]: c["status"] for c in report["payload"]["checks"]}
        assert checks["decomposition_residuals"] == "pass"
        assert checks["explicit_equals_recursive"] == "pass"
        assert checks["cycle_reduction"] == "pass"
        assert checks["regime_agreement"] == "pass"

    def test_complex_config_skips_basis_checks(self, capsys, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"n": 2, "alpha": 1.09804, "beta": 0.7,
                                   "a": [0.5, 0.5], "b": [0.5, 0.5]}))
        code, report, _ = run_cli(capsys, "verify", "--config", cfg)
        assert code == 0
        checks = {c["name"]: c["status"] for c in report["payload"]["checks"]}
        assert checks["decomposition_residuals"] == "skipped"
        assert checks["cycle_reduction"] == "pass"


def test_emit_benchmark_cycle_function(tmp_path):
    out = tmp_path / "benchmark.csv"
    report = emit_benchmark_cycle(seed=3, out=str(out))
    assert out.exists()
    payload = report["payload"]
    assert payload["rows"] == 701
    pred = payload["predicted_period"]
    assert abs(payload["estimated_period"] - pred) / pred < 0.10
