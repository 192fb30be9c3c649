"""Intermediate-input demand: per firm, per firm type, and mixture aggregate."""

from __future__ import annotations

from ..errors import DomainError
from ..model.firm import entry_cutoff, ofdi_cutoff
from ..model.schemas import FirmTechnology, InputCosts, Preferences
from ..numerics.pareto import pareto_partial_moment
from .schemas import MarketConfig, SupplyCurve


def firm_input_demand(
    prefs: Preferences, tech: FirmTechnology, costs: InputCosts, lam: float, chi_I: int = 0,
) -> float:
    """Inputs sourced at the optimal price, η·q/λ."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    rho = prefs.rho
    delta = costs.delta_tilde if chi_I else costs.delta
    index = 1.0 + tech.eta * delta
    return rho ** (1 / (1 - rho)) * tech.eta * prefs.A * index ** (1 / (rho - 1)) * lam ** (rho / (1 - rho))


def _sourcing_integral(market: MarketConfig, tech: FirmTechnology, delta: float, lower: float, upper: float) -> float:
    """∫ firm_input_demand dΠ over [max(lower, λ_m), upper]."""
    lower = max(lower, market.pareto.scale)
    if upper <= lower:
        return 0.0
    rho = market.prefs.rho
    costs = InputCosts(delta=delta, delta_tilde=market.delta_tilde)
    per_unit = firm_input_demand(market.prefs, tech, costs, 1.0)
    return per_unit * pareto_partial_moment(market.pareto, rho / (1 - rho), lower, upper)


def demand_m1(delta: float, market: MarketConfig, tech: FirmTechnology) -> float:
    """Demand when every entrant sources domestically."""
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if tech.eta == 0:
        return 0.0
    params = market.firm_params(tech, delta)
    lam_entry = entry_cutoff(params)
    if lam_entry < market.pareto.scale:
        return _sourcing_integral(market, tech, delta, lam_entry, float("inf"))

    rho, alpha, A = market.prefs.rho, market.pareto.shape, market.prefs.A
    k = alpha * (1 - rho) / rho
    lead = alpha * rho ** (1 + alpha) * market.pareto.scale**alpha / (alpha - rho / (1 - rho))
    return (
        lead
        * (1 - rho) ** (k - 1)
        * A**k
        * (1 + tech.eta * delta) ** (-1 - alpha)
        * tech.eta
        * tech.f ** (1 - k)
    )


def demand_m2(delta: float, market: MarketConfig, tech: FirmTechnology) -> float:
    """Demand above δ̃: only entrants in [λ̲, λ*] keep sourcing at home."""
    if delta <= market.delta_tilde:
        raise DomainError(f"demand_m2 needs delta > delta_tilde={market.delta_tilde}, got {delta}")
    if tech.eta == 0:
        return 0.0
    params = market.firm_params(tech, delta)
    lam_entry = entry_cutoff(params)
    lam_ofdi = ofdi_cutoff(params)
    if lam_entry < market.pareto.scale:
        return _sourcing_integral(market, tech, delta, lam_entry, lam_ofdi if lam_ofdi is not None else float("inf"))

    rho, alpha = market.prefs.rho, market.pareto.shape
    k = alpha * (1 - rho) / rho
    e = rho / (rho - 1)
    x = ((1 + tech.eta * market.delta_tilde) / (1 + tech.eta * delta)) ** e - 1.0
    braces = 1.0 - x ** (k - 1) * (tech.f_I / tech.f) ** (1 - k)
    return max(0.0, demand_m1(delta, market, tech) * braces)


def component_demand(delta: float, market: MarketConfig, tech: FirmTechnology) -> float:
    if delta <= market.delta_tilde:
        return demand_m1(delta, market, tech)
    return demand_m2(delta, market, tech)


def aggregate_demand(delta: float, market: MarketConfig) -> float:
    """Mixture-weighted demand with the kink at δ̃."""
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    return sum(c.weight * component_demand(delta, market, c.tech) for c in market.mixture.components)


def supply(delta: float, curve: SupplyCurve, ban_active: bool) -> float:
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    scale = curve.scale_banned if ban_active else curve.scale_allowed
    return scale * delta**curve.elasticity

