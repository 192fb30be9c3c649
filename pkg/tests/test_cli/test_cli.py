"""Tests for the command-line interface."""

from __future__ import annotations

import json

import pandas as pd
import pytest

from inputshock.cli import EXIT_CONFIG, EXIT_OK, main
from inputshock.run_config import RunConfig


@pytest.fixture
def run_json(tmp_path):
    def write(payload: dict):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path
    return write


class TestFigure4:
    def test_default_grid(self, tmp_path):
        assert main(["figure4", "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        curve = pd.read_csv(tmp_path / "figure4.csv")
        assert len(curve) == 3 * 601
        assert curve.loc[curve["delta"] <= 2.0, "probability"].eq(0.0).all()
        for eta, threshold in ((1.0, 5.0), (2.0, 4.5), (10.0, 4.1)):
            rows = curve[(curve["eta"] == eta) & ((curve["delta"] - threshold).abs() < 1e-9)]
            assert rows["probability"].iloc[0] == pytest.approx(1.0, abs=1e-9)
        row = curve[(curve["eta"] == 1.0) & ((curve["delta"] - 3.5).abs() < 1e-9)]
        assert row["probability"].iloc[0] == pytest.approx(0.25, abs=1e-12)

    def test_simulated_check_written(self, tmp_path, run_json):
        config = run_json({"figure4": {"points": 13, "mc_draws": 20000}})
        assert main(["figure4", "--config", str(config), "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        check = pd.read_csv(tmp_path / "figure4_check.csv")
        assert len(check) == 3 * 13
        assert {"dP_ddelta", "dP_deta", "mc_share", "z"} <= set(check.columns)
        row = check[(check["eta"] == 1.0) & ((check["delta"] - 3.5).abs() < 1e-9)].iloc[0]
        assert row["dP_ddelta"] == pytest.approx(1 / 3, rel=1e-9)
        assert abs(row["mc_share"] - 0.25) <= 5 * row["mc_se"]

    def test_simulated_check_can_be_disabled(self, tmp_path, run_json):
        config = run_json({"figure4": {"mc_draws": 0}})
        assert main(["figure4", "--config", str(config), "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        assert not (tmp_path / "figure4_check.csv").exists()

    def test_curves_increase_until_saturation(self, tmp_path):
        main(["figure4", "--out", str(tmp_path), "--quiet"])
        curve = pd.read_csv(tmp_path / "figure4.csv")
        one = curve[(curve["eta"] == 1.0) & (curve["delta"] > 2.0) & (curve["delta"] < 4.999)]
        assert one["probability"].diff().dropna().gt(0).all()


class TestPipeline:
    def test_equilibrium(self, tmp_path):
        assert main(["equilibrium", "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        payload = json.loads((tmp_path / "equilibrium.json").read_text())
        assert payload["regime"] == "regime2"
        assert payload["after"]["delta_star"] > 2.0 > payload["before"]["delta_star"]
        assert (tmp_path / "equilibrium_curves.csv").exists()

    def test_simulate_estimate_event_study(self, tmp_path, run_json):
        config = run_json({"panel": {"attrition_rate": 0.0, "background_hazard": 0.02}})
        assert main(["simulate", "--config", str(config), "--out", str(tmp_path), "--seed", "5", "--quiet"]) == EXIT_OK
        panel_csv = tmp_path / "panel.csv"
        assert len(panel_csv.read_text().splitlines()) == 1 + 1008
        metadata = json.loads((tmp_path / "panel_metadata.json").read_text())
        assert metadata["config"]["seed"] == 5
        dist = pd.read_csv(tmp_path / "covariate_distribution.csv")
        assert set(dist["group"]) == {"control", "treated"} and len(dist) == 6
        counts = pd.read_csv(tmp_path / "adoption_counts.csv")
        assert list(counts.columns) == ["year", "control", "treated"] and len(counts) == 24
        assert pd.read_csv(tmp_path / "summary_statistics.csv")["variable"].tolist() == ["ofdi", "size", "age", "roa"]

        assert main(["estimate", "--panel", str(panel_csv), "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        result = json.loads((tmp_path / "did_result.json").read_text())
        assert result["n_obs"] == 1008
        assert len(json.loads((tmp_path / "did_buildup.json").read_text())["results"]) == 5
        assert json.loads((tmp_path / "aggregate_result.json").read_text())["n_obs"] == 48
        assert "[5]" in (tmp_path / "did_table.txt").read_text()
        report = (tmp_path / "did_report.txt").read_text()
        assert "n_obs: 1008" in report and "cov: cluster" in report
        cells = pd.read_csv(tmp_path / "aggregate_cells.csv")
        assert len(cells) == 48 and cells["n_firms"].sum() == 1008

        assert main(["event-study", "--panel", str(panel_csv), "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        study = json.loads((tmp_path / "event_study.json").read_text())
        assert 1 <= study["pre_policy_wald"]["df"] <= study["pre_policy_wald"]["restrictions"] == 16
        coefs = pd.read_csv(tmp_path / "event_study.csv")
        assert len(coefs) == 23
        assert list(coefs.columns) == ["year", "coef", "se", "df", "p_value"]

    def test_same_seed_same_panel(self, tmp_path):
        for name in ("a", "b"):
            main(["simulate", "--out", str(tmp_path / name), "--seed", "3", "--quiet"])
        assert (tmp_path / "a" / "panel.csv").read_bytes() == (tmp_path / "b" / "panel.csv").read_bytes()

    def test_validate(self, tmp_path, run_json):
        config = run_json({"validate": {"event_study": False}})
        assert main(["validate", "--config", str(config), "--reps", "3", "--seed", "1",
                     "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        payload = json.loads((tmp_path / "validation.json").read_text())
        assert payload["replications"] == 3 and payload["seed"] == 1


class TestErrors:
    def test_invalid_config_value(self, tmp_path, run_json):
        config = run_json({"panel": {"n_treated": -1}})
        assert main(["simulate", "--config", str(config), "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["figure4", "--config", str(path), "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG

    def test_estimate_without_panel(self, tmp_path):
        assert main(["estimate", "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG

    def test_malformed_panel(self, tmp_path):
        path = tmp_path / "panel.csv"
        path.write_text("firm_id,group,year,ofdi,size,roa,age\nA,0,2016,7,,,\n", encoding="utf-8")
        assert main(["estimate", "--panel", str(path), "--out", str(tmp_path), "--quiet"]) == EXIT_CONFIG

    def test_nonpositive_reps(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["validate", "--reps", "0", "--out", str(tmp_path)])
        assert exc.value.code == 2


class TestRunConfig:
    def test_overrides_reach_blocks(self):
        cfg = RunConfig().with_overrides(seed=9, replications=4)
        assert cfg.panel.seed == 9 and cfg.validate_.seed == 9
        assert cfg.validate_.replications == 4

    def test_top_level_seed_in_file(self, run_json):
        cfg = RunConfig.load(run_json({"seed": 12})).with_overrides()
        assert cfg.panel.seed == 12

    def test_schema_lists_blocks(self, capsys):
        assert main(["config-schema"]) == EXIT_OK
        schema = json.loads(capsys.readouterr().out)
        assert {"model", "market", "panel", "did", "validate"} <= set(schema["properties"])
