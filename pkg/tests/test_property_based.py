"""Property-based tests using Hypothesis.

Invariants of the model and the estimation layer rather than fixed oracles:
  - profits vanish at the entry cutoff and the OFDI gap vanishes at λ*
  - the OFDI probability stays in [0, 1] and never falls as δ rises
  - Pareto partial moments add over adjacent ranges
  - unit fixed effects absorb anything constant within a firm
"""

from __future__ import annotations

import math

import numpy as np
import pandas as pd
import pytest

try:
    from hypothesis import assume, given, settings
    from hypothesis import strategies as st

    HAS_HYPOTHESIS = True
except ImportError:
    HAS_HYPOTHESIS = False

pytestmark = pytest.mark.skipif(not HAS_HYPOTHESIS, reason="hypothesis not installed")


if HAS_HYPOTHESIS:

    @st.composite
    def model_params(draw):
        from inputshock.model.schemas import FirmTechnology, InputCosts, ModelParams, Preferences
        from inputshock.numerics.pareto import ParetoDist

        rho = draw(st.floats(min_value=0.3, max_value=0.7))
        alpha = rho / (1 - rho) + draw(st.floats(min_value=0.5, max_value=3.0))
        delta_tilde = draw(st.floats(min_value=0.5, max_value=3.0))
        return ModelParams(
            prefs=Preferences(rho=rho, A=draw(st.floats(min_value=0.5, max_value=2.0))),
            pareto=ParetoDist(scale=1.0, shape=alpha),
            costs=InputCosts(delta=delta_tilde + draw(st.floats(min_value=0.05, max_value=4.0)),
                             delta_tilde=delta_tilde),
            tech=FirmTechnology(
                eta=draw(st.floats(min_value=0.2, max_value=10.0)),
                f=draw(st.floats(min_value=0.5, max_value=2.0)),
                f_I=draw(st.floats(min_value=0.5, max_value=2.0)),
            ),
        )

    class TestCutoffInvariants:
        @given(params=model_params())
        @settings(max_examples=1000, deadline=None)
        def test_profit_is_zero_at_entry_cutoff(self, params):
            from inputshock.model.firm import entry_cutoff, profit

            lam = entry_cutoff(params)
            assert profit(params, lam, 0) == pytest.approx(0.0, abs=1e-9 * params.tech.f)

        @given(params=model_params())
        @settings(max_examples=1000, deadline=None)
        def test_ofdi_gap_is_zero_at_ofdi_cutoff(self, params):
            from inputshock.model.firm import ofdi_cutoff, profit_gap

            lam = ofdi_cutoff(params)
            assume(lam is not None and math.isfinite(lam))
            assert profit_gap(params, lam) == pytest.approx(0.0, abs=1e-9 * (params.tech.f + params.tech.f_I))

        @given(params=model_params())
        @settings(max_examples=50, deadline=None)
        def test_sorted_cutoffs_iff_unsaturated(self, params):
            from inputshock.model.firm import cutoffs, ofdi_probability

            cut = cutoffs(params)
            assume(cut.lambda_ofdi is not None and abs(cut.lambda_ofdi / cut.lambda_entry - 1.0) > 1e-6)
            if cut.is_sorted:
                assert ofdi_probability(params) < 1.0
            else:
                assert ofdi_probability(params) == 1.0

    class TestProbabilityInvariants:
        @given(params=model_params(), step=st.floats(min_value=0.0, max_value=3.0))
        @settings(max_examples=50, deadline=None)
        def test_bounded_and_monotone_in_delta(self, params, step):
            from inputshock.model.firm import ofdi_probability

            low = ofdi_probability(params)
            high = ofdi_probability(params.with_delta(params.costs.delta + step))
            assert 0.0 <= low <= 1.0
            assert 0.0 <= high <= 1.0
            assert high >= low - 1e-12

        @given(params=model_params())
        @settings(max_examples=30, deadline=None)
        def test_no_adoption_when_subsidiary_is_dearer(self, params):
            from inputshock.model.firm import ofdi_cutoff, ofdi_probability

            dearer = params.with_delta(params.costs.delta_tilde * 0.9)
            assert ofdi_probability(dearer) == 0.0
            assert ofdi_cutoff(dearer) is None

    class TestParetoInvariants:
        @given(
            alpha=st.floats(min_value=1.1, max_value=6.0),
            frac=st.floats(min_value=0.0, max_value=0.95),
            a=st.floats(min_value=1.0, max_value=5.0),
            width=st.floats(min_value=0.1, max_value=20.0),
        )
        @settings(max_examples=60, deadline=None)
        def test_partial_moments_add(self, alpha, frac, a, width):
            from inputshock.numerics.pareto import ParetoDist, pareto_partial_moment

            dist = ParetoDist(scale=1.0, shape=alpha)
            k = frac * alpha
            b = a + width
            whole = pareto_partial_moment(dist, k, a)
            parts = pareto_partial_moment(dist, k, a, b) + pareto_partial_moment(dist, k, b)
            assert parts == pytest.approx(whole, rel=1e-9)

        @given(alpha=st.floats(min_value=0.5, max_value=6.0), x=st.floats(min_value=1.0, max_value=50.0))
        @settings(max_examples=60, deadline=None)
        def test_zeroth_moment_is_survival(self, alpha, x):
            from inputshock.numerics.pareto import ParetoDist, pareto_partial_moment

            dist = ParetoDist(scale=1.0, shape=alpha)
            assert pareto_partial_moment(dist, 0.0, x) == pytest.approx(dist.survival(x), rel=1e-9)

    class TestRegressionInvariants:
        @given(seed=st.integers(min_value=0, max_value=10_000), shift=st.floats(min_value=-50.0, max_value=50.0))
        @settings(max_examples=25, deadline=None)
        def test_unit_constants_are_absorbed(self, seed, shift):
            from inputshock.numerics import fe_ols

            rng = np.random.default_rng(seed)
            units = np.repeat(np.arange(12), 5)
            X = pd.DataFrame({"x1": rng.standard_normal(units.size), "x2": rng.standard_normal(units.size)})
            y = 0.7 * X["x1"].to_numpy() + rng.standard_normal(units.size)
            offsets = shift * rng.standard_normal(12)[units]

            base = fe_ols(y, X, units)
            moved = fe_ols(y + offsets, X, units)
            pd.testing.assert_series_equal(base.coefficients, moved.coefficients, atol=1e-8, rtol=1e-8)

        @given(seed=st.integers(min_value=0, max_value=10_000))
        @settings(max_examples=25, deadline=None)
        def test_wald_ignores_column_order(self, seed):
            from inputshock.numerics import RegressionFit, wald_joint

            rng = np.random.default_rng(seed)
            names = ["a", "b", "c"]
            L = rng.standard_normal((3, 3))
            cov = L @ L.T + 0.1 * np.eye(3)
            fit = RegressionFit(
                coefficients=pd.Series(rng.standard_normal(3), index=names),
                covariance=pd.DataFrame(cov, index=names, columns=names),
                r_squared=0.0,
                dropped_columns=[],
                n_obs=10,
                n_units=5,
                residuals=np.zeros(10),
            )
            assert wald_joint(fit, names) == pytest.approx(wald_joint(fit, names[::-1]))
