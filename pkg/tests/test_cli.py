"""
模块名称：test_cli.py
主要功能：命令行入口的配置校验、结果CSV、运行清单与退出码测试
"""

import json

import pandas as pd
import pytest

from app.cli import EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, main

TABLE_SCENARIO = {
    "geometry": {"R_m": 1000, "r_m": 600, "alpha": 3.6},
    "soi": {"kappa": 1.5, "mu": 1.2, "m": 10},
    "interferers": [{"kappa": 1, "mu": 1, "m": 10}],
    "T_dB": 3,
    "series": {"P": 50},
}


def run(tmp_path, config: dict, *extra: str) -> int:
    path = tmp_path / "run.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return main(["--config", str(path), "--out", str(tmp_path / "out"), *extra])


def results(tmp_path) -> pd.DataFrame:
    return pd.read_csv(tmp_path / "out" / "results.csv")


def manifest(tmp_path) -> dict:
    return json.loads((tmp_path / "out" / "manifest.json").read_text(encoding="utf-8"))


class TestValidation:
    def test_negative_mu_names_the_key(self, tmp_path, capsys):
        config = {**TABLE_SCENARIO, "command": "outage", "soi": {"kappa": 1.5, "mu": -1.2, "m": 10}}
        assert run(tmp_path, config) == EXIT_INVALID
        assert "soi.mu" in capsys.readouterr().err

    def test_unknown_key_rejected(self, tmp_path):
        assert run(tmp_path, {**TABLE_SCENARIO, "command": "outage", "colour": "blue"}) == EXIT_INVALID

    def test_missing_block_for_command(self, tmp_path, capsys):
        assert run(tmp_path, {**TABLE_SCENARIO, "command": "sweep"}) == EXIT_INVALID
        assert "sweep" in capsys.readouterr().err

    def test_user_outside_cell(self, tmp_path):
        config = {**TABLE_SCENARIO, "command": "outage", "geometry": {"R_m": 1000, "r_m": 1200, "alpha": 3.6}}
        assert run(tmp_path, config) == EXIT_INVALID

    def test_missing_config_file(self, tmp_path, capsys):
        code = main(["--config", str(tmp_path / "absent.json"), "--out", str(tmp_path / "out")])
        assert code == EXIT_INVALID
        assert "absent.json" in capsys.readouterr().err

    def test_interferer_block_count_mismatch(self, tmp_path, capsys):
        blocks = [{"kappa": 1, "mu": 1, "m": 10}] * 3
        assert run(tmp_path, {**TABLE_SCENARIO, "command": "outage", "interferers": blocks}) == EXIT_INVALID
        assert "build_interferers" in capsys.readouterr().err

    def test_numerical_failure(self, tmp_path, capsys):
        # 期望信号μ非整数时速率无定义
        assert run(tmp_path, {**TABLE_SCENARIO, "command": "rate"}) == EXIT_NUMERICAL
        assert "rate_shadowed" in capsys.readouterr().err


class TestCommands:
    def test_outage(self, tmp_path):
        assert run(tmp_path, {**TABLE_SCENARIO, "command": "outage"}) == EXIT_OK
        frame = results(tmp_path)
        assert list(frame.columns) == ["swept_value", "analytic_value", "error_bound"]
        assert 0.0 < frame.loc[0, "analytic_value"] < 1.0
        data = manifest(tmp_path)
        assert data["config"]["command"] == "outage"
        assert "numpy" in data["versions"]
        assert data["wall_time_s"] >= 0.0

    def test_rate(self, tmp_path):
        config = {**TABLE_SCENARIO, "command": "rate", "soi": {"kappa": 2.5, "mu": 3, "m": 5}}
        assert run(tmp_path, config) == EXIT_OK
        frame = results(tmp_path)
        assert list(frame.columns) == ["swept_value", "analytic_value"]
        assert frame.loc[0, "analytic_value"] > 0.0

    def test_sweep_threshold(self, tmp_path):
        config = {**TABLE_SCENARIO, "command": "sweep",
                  "sweep": {"variable": "T_dB", "from": -3, "to": 6, "points": 4}}
        assert run(tmp_path, config, "--threads", "2") == EXIT_OK
        frame = results(tmp_path)
        assert frame["swept_value"].tolist() == [-3.0, 0.0, 3.0, 6.0]
        assert frame["analytic_value"].is_monotonic_increasing

    def test_mc_validate(self, tmp_path):
        config = {**TABLE_SCENARIO, "command": "mc-validate",
                  "mc": {"seed": 1, "batches": 20, "batch_size": 50}}
        assert run(tmp_path, config) == EXIT_OK
        frame = results(tmp_path)
        assert {"mc_mean", "mc_ci_lo", "mc_ci_hi", "ks_statistic"} <= set(frame.columns)
        batches = pd.read_csv(tmp_path / "out" / "batches.csv")
        assert len(batches) == 20

    def test_seed_override(self, tmp_path):
        config = {**TABLE_SCENARIO, "command": "outage", "mc": {"seed": 1, "batches": 4, "batch_size": 10}}
        assert run(tmp_path, config, "--seed", "99") == EXIT_OK
        assert manifest(tmp_path)["config"]["mc"]["seed"] == 99

    def test_manifest_reproduces_results(self, tmp_path):
        config = {**TABLE_SCENARIO, "command": "outage", "mc": {"seed": 5, "batches": 6, "batch_size": 20}}
        assert run(tmp_path, config) == EXIT_OK
        first = (tmp_path / "out" / "results.csv").read_bytes()
        rerun = tmp_path / "rerun"
        rerun.mkdir()
        echoed = manifest(tmp_path)["config"]
        assert run(rerun, echoed) == EXIT_OK
        assert (rerun / "out" / "results.csv").read_bytes() == first

    @pytest.mark.slow
    def test_reuse_sweep_over_m(self, tmp_path):
        config = {
            "command": "sweep",
            "geometry": {"R_m": 1000, "r_m": 500, "alpha": 3.4, "radial_intervals": 2},
            "soi": {"kappa": 2.5, "mu": 3, "m": 1},
            "interferers": [{"kappa": 1, "mu": 1.2, "m": 1.5}],
            "series": {"P": 30},
            "reuse": {"scheme": "SFR", "S_t_dB": 3, "beta": 2},
            "sweep": {"variable": "m", "from": 1, "to": 20, "points": 3},
        }
        assert run(tmp_path, config) == EXIT_OK
        assert list(results(tmp_path).columns) == ["m", "ffr_rate", "sfr_rate"]
