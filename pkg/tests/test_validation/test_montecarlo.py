"""Tests for the replication study."""

from __future__ import annotations

import pytest

from inputshock.data import PanelConfig
from inputshock.estimation import DidSpec
from inputshock.validation import ValidationConfig, run_validation


def _config(**overrides) -> ValidationConfig:
    base = {"replications": 6, "seed": 17, "event_study": False}
    base.update(overrides)
    return ValidationConfig(**base)


class TestRunValidation:
    def test_summary_fields(self):
        summary = run_validation(_config())
        assert summary.replications == 6
        assert len(summary.beta2_estimates) == 6
        assert summary.true_beta2 == pytest.approx(0.1639, abs=1e-9)
        assert 0 <= summary.coverage <= 1
        assert summary.wald_rejection_rate is None and summary.wald_available == 0

    def test_reproducible(self):
        assert run_validation(_config()).beta2_estimates == run_validation(_config()).beta2_estimates

    def test_worker_count_does_not_change_results(self):
        serial = run_validation(_config())
        parallel = run_validation(_config(workers=2))
        assert parallel.beta2_estimates == serial.beta2_estimates

    def test_event_study_rates(self):
        summary = run_validation(_config(
            event_study=True,
            panel=PanelConfig(background_hazard=0.03),
        ))
        assert summary.wald_available == 6
        assert 0 <= summary.wald_rejection_rate <= 1
        assert sorted(summary.pre_coefficient_rejection) == list(range(2001, 2017))
        assert all(0 <= r <= 1 for r in summary.pre_coefficient_rejection.values())

    def test_rejects_zero_workers(self):
        with pytest.raises(ValueError):
            ValidationConfig(workers=0)


@pytest.mark.slow
class TestRecovery:
    def test_large_sample_recovers_effect(self):
        from inputshock.data import simulate_panel
        from inputshock.estimation import estimate_did

        panel = simulate_panel(PanelConfig(n_treated=10_000, n_control=10_000, seed=31))
        assert estimate_did(panel).beta2 == pytest.approx(0.1639, abs=0.01)

    def test_full_scale_mean_and_coverage(self):
        summary = run_validation(_config(replications=500, seed=2017, workers=2))
        assert summary.mean_beta2 == pytest.approx(0.1639, abs=0.015)
        assert 0.93 <= summary.coverage <= 0.97

    def test_null_pretrend_test_size(self):
        summary = run_validation(_config(
            replications=500, seed=99, event_study=True, workers=2,
            panel=PanelConfig(true_effect=0.0, background_hazard=0.03),
            did=DidSpec(),
        ))
        assert summary.wald_available == 500
        assert summary.wald_rejection_rate <= 0.08
        assert summary.rejection_rate <= 0.08
        rates = summary.pre_coefficient_rejection
        assert len(rates) == 16
        # each pre-policy coefficient is insignificant in about 95% of draws
        assert max(rates.values()) <= 0.10
        assert sum(rates.values()) / len(rates) <= 0.07


@pytest.mark.slow
class TestStructuralPipeline:
    """Simulate from the input-market model, then estimate the firm-level DID."""

    @staticmethod
    def _structural(kind: str, seed: int, background_hazard: float):
        from inputshock.data import DgpMode
        from inputshock.market import demo_market

        # three times the reference firm counts
        panel = PanelConfig(
            dgp_mode=DgpMode.STRUCTURAL, market=demo_market(kind),
            n_treated=60, n_control=66, background_hazard=background_hazard,
        )
        return run_validation(_config(replications=200, seed=seed, workers=2, panel=panel))

    def test_regime2_effect_detected(self):
        summary = self._structural("structural", seed=41, background_hazard=0.0)
        assert summary.rejection_rate >= 0.90
        assert sum(b > 0 for b in summary.beta2_estimates) >= 0.90 * 200
        # P = 0.36 after the ban, adoption year uniform over seven post years
        assert summary.true_beta2 == pytest.approx(0.36 * 4 / 7, rel=1e-6)

    def test_regime1_effect_not_detected(self):
        summary = self._structural("regime1", seed=43, background_hazard=0.03)
        assert summary.true_beta2 == 0.0
        assert summary.rejection_rate <= 0.10
