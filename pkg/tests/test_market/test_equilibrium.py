"""Tests for market clearing and the export-ban experiment."""

from __future__ import annotations

import numpy as np
import pytest
from pydantic import ValidationError

from inputshock.errors import BracketError
from inputshock.market import (
    FirmTypeMixture,
    MixtureComponent,
    Regime,
    SupplyCurve,
    aggregate_demand,
    classify_regime,
    demo_market,
    equilibrium_curves,
    excess_demand,
    policy_experiment,
    solve_equilibrium,
    supply,
)
from inputshock.market.schemas import Equilibrium, MarketConfig
from inputshock.model import FirmTechnology


class TestSolve:
    def test_clears_market(self, reference_market):
        eq = solve_equilibrium(reference_market, ban_active=False)
        assert aggregate_demand(eq.delta_star, reference_market) == pytest.approx(eq.quantity, rel=1e-9)
        assert eq.quantity == pytest.approx(supply(eq.delta_star, reference_market.supply, False))

    def test_sign_change_brackets_root(self, reference_market):
        eq = solve_equilibrium(reference_market, ban_active=True)
        assert excess_demand(eq.delta_star - 1e-7, reference_market, True) > 0
        assert excess_demand(eq.delta_star + 1e-7, reference_market, True) < 0

    def test_more_supply_lowers_cost(self, reference_market):
        richer = reference_market.model_copy(update={"supply": SupplyCurve(scale_allowed=0.05, scale_banned=0.001)})
        assert solve_equilibrium(richer).delta_star < solve_equilibrium(reference_market).delta_star

    def test_boundary_equilibrium_has_no_ofdi(self, reference_market):
        # s₁ chosen so supply meets M₁(δ̃) = 1/216 exactly at δ = 2
        market = reference_market.model_copy(
            update={"supply": SupplyCurve(scale_allowed=1 / 432, scale_banned=0.001)}
        )
        eq = solve_equilibrium(market)
        assert eq.delta_star == pytest.approx(2.0, abs=1e-9)
        assert eq.p_ofdi == pytest.approx(0.0, abs=1e-15)

    def test_no_demand_means_no_bracket(self, reference_market):
        market = reference_market.model_copy(
            update={"mixture": FirmTypeMixture.single(FirmTechnology(eta=0.0))}
        )
        with pytest.raises(BracketError):
            solve_equilibrium(market)


class TestPolicyExperiment:
    def test_regime1(self):
        result = policy_experiment(demo_market("regime1"))
        assert result.regime is Regime.REGIME1
        assert result.before.delta_star == pytest.approx(0.99, abs=0.02)
        assert result.after.delta_star == pytest.approx(1.49, abs=0.02)
        assert result.delta_p_ofdi == 0.0

    def test_regime2(self):
        result = policy_experiment(demo_market("regime2"))
        assert result.regime is Regime.REGIME2
        assert result.before.delta_star < 2.0 < result.after.delta_star
        assert result.after.delta_star == pytest.approx(2.49, abs=0.02)
        assert result.delta_p_ofdi > 0
        assert result.before.regime is result.after.regime is Regime.REGIME2

    def test_regime3(self):
        result = policy_experiment(demo_market("regime3"))
        assert result.regime is Regime.REGIME3
        assert 2.0 < result.before.delta_star < result.after.delta_star
        assert 3.1 < result.after.delta_star < 3.35
        assert result.delta_p_ofdi > 0

    def test_structural_demo_lands_on_reference_cost(self):
        result = policy_experiment(demo_market("structural"))
        assert result.after.delta_star == pytest.approx(3.5, abs=1e-8)
        assert result.after.p_ofdi == pytest.approx(0.36, abs=1e-8)
        assert result.before.p_ofdi == 0.0

    def test_saturated_type_does_not_move(self):
        result = policy_experiment(demo_market("saturated"))
        assert result.regime is Regime.REGIME3
        saturated, ordinary = result.component_delta_p
        assert saturated.saturated_before and saturated.p_before == 1.0 and saturated.delta_p == 0.0
        assert not ordinary.saturated_before and ordinary.delta_p > 0
        assert result.delta_p_ofdi == pytest.approx(0.5 * ordinary.delta_p, rel=1e-9)

    @pytest.mark.parametrize("kind", ["regime1", "regime2", "regime3", "structural", "saturated"])
    def test_ban_never_lowers_cost(self, kind):
        result = policy_experiment(demo_market(kind))
        assert result.after.delta_star >= result.before.delta_star
        assert result.delta_p_ofdi >= 0


class TestClassification:
    @pytest.mark.parametrize("before,after,regime", [
        (1.0, 1.5, Regime.REGIME1),
        (1.0, 2.0, Regime.REGIME1),
        (2.0, 2.5, Regime.REGIME2),
        (2.1, 2.5, Regime.REGIME3),
    ])
    def test_thresholds(self, before, after, regime):
        eq = lambda d: Equilibrium(delta_star=d, quantity=0.0, p_ofdi=0.0)  # noqa: E731
        assert classify_regime(eq(before), eq(after), 2.0) is regime


class TestSchemas:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            FirmTypeMixture(components=[
                MixtureComponent(tech=FirmTechnology(eta=1.0), weight=0.5),
                MixtureComponent(tech=FirmTechnology(eta=2.0), weight=0.4),
            ])

    def test_unknown_demo(self):
        with pytest.raises(ValueError):
            demo_market("regime9")

    def test_curves_layout(self, reference_market):
        curves = equilibrium_curves(reference_market)
        assert list(curves.columns) == ["delta", "demand", "supply_allowed", "supply_banned"]
        assert len(curves) == 301
        assert (curves["supply_allowed"] >= curves["supply_banned"]).all()


def _closed_form_excess(market: MarketConfig, deltas: np.ndarray, ban_active: bool) -> np.ndarray:
    """Excess demand at ρ=0.5, α=2, A=λ_m=1 written out directly.

    M₁ = η / (8 f (1+ηδ)³); above δ̃ it is scaled by max(0, 1 − x f/f_I)
    with x = (1+ηδ)/(1+ηδ̃) − 1.
    """
    assert market.prefs.rho == 0.5 and market.pareto.shape == 2.0
    assert market.prefs.A == 1.0 and market.pareto.scale == 1.0
    demand = np.zeros_like(deltas)
    for c in market.mixture.components:
        eta, f, f_I = c.tech.eta, c.tech.f, c.tech.f_I
        m1 = eta / (8 * f * (1 + eta * deltas) ** 3)
        x = (1 + eta * deltas) / (1 + eta * market.delta_tilde) - 1
        braces = np.where(deltas > market.delta_tilde, np.maximum(0.0, 1 - x * f / f_I), 1.0)
        demand += c.weight * m1 * braces
    scale = market.supply.scale_banned if ban_active else market.supply.scale_allowed
    return demand - scale * deltas**market.supply.elasticity


def _random_market(rng: np.random.Generator) -> MarketConfig:
    n_types = int(rng.integers(1, 3))
    weights = rng.dirichlet(np.ones(n_types))
    components = [
        MixtureComponent(
            tech=FirmTechnology(eta=float(rng.uniform(0.2, 6.0)), f=float(rng.uniform(0.5, 2.0)),
                                f_I=float(rng.uniform(0.5, 2.0))),
            weight=float(w),
        )
        for w in weights
    ]
    # exact unit sum for the mixture validator
    components[-1] = components[-1].model_copy(update={"weight": 1.0 - sum(c.weight for c in components[:-1])})
    s_allowed = float(10 ** rng.uniform(-4, -1))
    return demo_market("regime2").model_copy(update={
        "mixture": FirmTypeMixture(components=components),
        "supply": SupplyCurve(scale_allowed=s_allowed, scale_banned=s_allowed * float(rng.uniform(0.02, 1.0)),
                              elasticity=float(rng.uniform(0.5, 2.0))),
    })


class TestGridOracle:
    GRID = np.linspace(1e-5, 10.0, 1_000_000)

    @pytest.mark.parametrize("kind", ["regime1", "regime2", "regime3", "structural", "saturated"])
    @pytest.mark.parametrize("ban_active", [False, True])
    def test_solver_matches_grid_crossing(self, kind, ban_active):
        market = demo_market(kind)
        excess = _closed_form_excess(market, self.GRID, ban_active)
        idx = int(np.argmax(excess <= 0))
        assert idx > 0 and excess[idx] <= 0
        eq = solve_equilibrium(market, ban_active=ban_active)
        assert self.GRID[idx - 1] - 1e-9 <= eq.delta_star <= self.GRID[idx] + 1e-9

    @pytest.mark.parametrize("kind", ["regime1", "regime2", "regime3", "structural", "saturated"])
    def test_library_demand_matches_closed_form(self, kind):
        market = demo_market(kind)
        deltas = np.linspace(0.05, 8.0, 400)
        expected = _closed_form_excess(market, deltas, False) + market.supply.scale_allowed * deltas
        actual = np.array([aggregate_demand(float(d), market) for d in deltas])
        np.testing.assert_allclose(actual, expected, rtol=1e-9, atol=1e-15)


class TestComparativeStatics:
    @pytest.mark.parametrize("kind", ["regime1", "regime2", "regime3", "structural", "saturated"])
    @pytest.mark.parametrize("ban_active", [False, True])
    def test_excess_demand_decreasing(self, kind, ban_active):
        market = demo_market(kind)
        values = np.array([excess_demand(float(d), market, ban_active) for d in np.linspace(1e-3, 12.0, 2000)])
        assert (np.diff(values) < 0).all()

    def test_random_markets(self):
        rng = np.random.default_rng(20170101)
        checked = 0
        for _ in range(120):
            result = policy_experiment(_random_market(rng))
            assert result.after.delta_star >= result.before.delta_star
            assert result.after.p_ofdi >= result.before.p_ofdi
            assert result.delta_p_ofdi >= 0
            checked += 1
        assert checked == 120
