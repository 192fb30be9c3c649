"""Tests for Pareto moments and draws."""

from __future__ import annotations

import math

import numpy as np
import pytest

from inputshock.errors import DivergentIntegralError, DomainError
from inputshock.numerics import ParetoDist, pareto_draws, pareto_partial_moment, pareto_sample, truncated


class TestPartialMoment:
    def test_first_moment_above_two(self):
        assert pareto_partial_moment(ParetoDist(scale=1, shape=2), 1, 2) == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("scale,shape", [(1.0, 2.0), (0.5, 3.0), (2.0, 1.2)])
    def test_total_mass_is_one(self, scale, shape):
        dist = ParetoDist(scale=scale, shape=shape)
        assert pareto_partial_moment(dist, 0, scale) == pytest.approx(1.0, rel=1e-12)

    def test_additive_over_adjacent_intervals(self):
        dist = ParetoDist(scale=1.0, shape=2.5)
        whole = pareto_partial_moment(dist, 1.0, 1.5, 9.0)
        parts = pareto_partial_moment(dist, 1.0, 1.5, 4.0) + pareto_partial_moment(dist, 1.0, 4.0, 9.0)
        assert whole == pytest.approx(parts, rel=1e-12)

    def test_log_case_when_order_equals_shape(self):
        dist = ParetoDist(scale=1.0, shape=2.0)
        assert pareto_partial_moment(dist, 2.0, 1.0, math.e) == pytest.approx(2.0, rel=1e-12)

    def test_unbounded_divergent_moment(self):
        with pytest.raises(DivergentIntegralError):
            pareto_partial_moment(ParetoDist(scale=1, shape=2), 2, 1.0)

    def test_lower_limit_below_scale(self):
        with pytest.raises(DomainError):
            pareto_partial_moment(ParetoDist(scale=1, shape=2), 0, 0.5)

    def test_empty_interval(self):
        with pytest.raises(DomainError):
            pareto_partial_moment(ParetoDist(scale=1, shape=2), 0, 3.0, 3.0)


class TestDraws:
    def test_same_seed_same_value(self):
        dist = ParetoDist(scale=1, shape=2)
        assert pareto_sample(dist, np.random.default_rng(11)) == pareto_sample(dist, np.random.default_rng(11))

    def test_vectorized_matches_scalar_stream(self):
        dist = ParetoDist(scale=1.5, shape=3)
        rng_a, rng_b = np.random.default_rng(5), np.random.default_rng(5)
        draws = pareto_draws(dist, rng_a, 4)
        singles = [pareto_sample(dist, rng_b) for _ in range(4)]
        np.testing.assert_allclose(draws, singles, rtol=0, atol=0)

    def test_empirical_cdf_close_to_analytic(self):
        dist = ParetoDist(scale=1.0, shape=2.0)
        draws = np.sort(pareto_draws(dist, np.random.default_rng(3), 200_000))
        empirical = np.arange(1, draws.size + 1) / draws.size
        assert np.max(np.abs(empirical - dist.cdf(draws))) < 0.005

    def test_large_shape_concentrates_at_scale(self):
        draws = pareto_draws(ParetoDist(scale=2.0, shape=1e6), np.random.default_rng(1), 1000)
        assert draws.min() >= 2.0
        assert draws.std() < 1e-4

    def test_truncation_raises_scale_only(self):
        dist = truncated(ParetoDist(scale=1.0, shape=2.0), 12.0)
        assert dist.scale == 12.0 and dist.shape == 2.0
        assert truncated(dist, 3.0).scale == 12.0
