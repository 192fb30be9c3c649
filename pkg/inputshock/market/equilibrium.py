"""Market clearing, regime classification and the ban experiment."""

from __future__ import annotations

from typing import Iterable

import numpy as np
import pandas as pd

from ..config import settings
from ..errors import BracketError
from ..model.firm import ofdi_probability, saturation_threshold
from ..numerics.roots import bisect
from ..utils.logging_config import get_logger
from .demand import aggregate_demand, supply
from .schemas import ComponentShift, Equilibrium, MarketConfig, PolicyExperimentResult, Regime

log = get_logger(__name__)


def mixture_probability(market: MarketConfig, delta: float) -> float:
    """Weighted OFDI probability across firm types at domestic cost δ."""
    total = sum(
        c.weight * ofdi_probability(market.firm_params(c.tech, delta))
        for c in market.mixture.components
    )
    return float(min(1.0, max(0.0, total)))


def excess_demand(delta: float, market: MarketConfig, ban_active: bool) -> float:
    return aggregate_demand(delta, market) - supply(delta, market.supply, ban_active)


def _bracket(market: MarketConfig, ban_active: bool) -> tuple[float, float]:
    lo = settings.bracket_lo
    if excess_demand(lo, market, ban_active) <= 0:
        raise BracketError(f"no positive excess demand at the bracket floor delta={lo}")
    hi = market.delta_tilde * settings.bracket_hi_multiple
    for _ in range(settings.bracket_max_expansions + 1):
        if excess_demand(hi, market, ban_active) <= 0:
            return lo, hi
        hi *= settings.bracket_growth
    raise BracketError(
        f"excess demand still positive at delta={hi / settings.bracket_growth:.6g} "
        f"after {settings.bracket_max_expansions} expansions"
    )


def solve_equilibrium(market: MarketConfig, ban_active: bool = False) -> Equilibrium:
    """Bisect excess demand (decreasing in δ) for the clearing cost."""
    lo, hi = _bracket(market, ban_active)
    delta_star = bisect(lambda d: excess_demand(d, market, ban_active), lo, hi)
    eq = Equilibrium(
        delta_star=delta_star,
        quantity=supply(delta_star, market.supply, ban_active),
        p_ofdi=mixture_probability(market, delta_star),
        ban_active=ban_active,
    )
    log.info("equilibrium_solved", delta_star=eq.delta_star, quantity=eq.quantity,
             p_ofdi=eq.p_ofdi, ban_active=ban_active)
    return eq


def classify_regime(before: Equilibrium, after: Equilibrium, delta_tilde: float) -> Regime:
    if after.delta_star <= delta_tilde:
        return Regime.REGIME1
    if before.delta_star <= delta_tilde:
        return Regime.REGIME2
    return Regime.REGIME3


def component_delta_p(market: MarketConfig, delta_before: float, delta_after: float) -> list[ComponentShift]:
    shifts = []
    for c in market.mixture.components:
        p_before = ofdi_probability(market.firm_params(c.tech, delta_before))
        p_after = ofdi_probability(market.firm_params(c.tech, delta_after))
        saturated = c.tech.eta > 0 and delta_before >= saturation_threshold(market.firm_params(c.tech, delta_before))
        shifts.append(ComponentShift(
            eta=c.tech.eta, f=c.tech.f, f_I=c.tech.f_I, weight=c.weight,
            p_before=p_before, p_after=p_after, delta_p=p_after - p_before,
            saturated_before=saturated,
        ))
    return shifts


def policy_experiment(market: MarketConfig) -> PolicyExperimentResult:
    """Solve without and with the export ban and classify the shift."""
    before = solve_equilibrium(market, ban_active=False)
    after = solve_equilibrium(market, ban_active=True)
    regime = classify_regime(before, after, market.delta_tilde)
    before = before.model_copy(update={"regime": regime})
    after = after.model_copy(update={"regime": regime})
    delta_p = 0.0 if regime is Regime.REGIME1 else after.p_ofdi - before.p_ofdi
    log.info("policy_experiment", regime=regime.value, delta_before=before.delta_star,
             delta_after=after.delta_star, delta_p_ofdi=delta_p)
    return PolicyExperimentResult(
        before=before,
        after=after,
        regime=regime,
        delta_p_ofdi=delta_p,
        component_delta_p=component_delta_p(market, before.delta_star, after.delta_star),
    )


def equilibrium_curves(market: MarketConfig, deltas: Iterable[float] | None = None) -> pd.DataFrame:
    """Demand and both supply curves on one δ grid."""
    if deltas is None:
        top = max(3 * market.delta_tilde, 1.0)
        deltas = np.linspace(0.0, top, 301)
    rows = []
    for d in deltas:
        d = float(d)
        rows.append({
            "delta": d,
            "demand": aggregate_demand(d, market),
            "supply_allowed": supply(d, market.supply, ban_active=False),
            "supply_banned": supply(d, market.supply, ban_active=True),
        })
    return pd.DataFrame(rows, columns=["delta", "demand", "supply_allowed", "supply_banned"])
