"""Closed-form firm problem: pricing, profit, cutoffs and the OFDI decision.

Notation: k = α(1−ρ)/ρ, e = ρ/(ρ−1), r = (1+ηδ̃)/(1+ηδ) and x = rᵉ − 1.
The OFDI probability among entrants is (x·f/f_I)ᵏ below saturation.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np
import pandas as pd

from ..errors import DomainError
from ..numerics.pareto import pareto_draws, truncated
from ..utils.logging_config import get_logger
from .schemas import Cutoffs, EntryOutcome, FirmTechnology, InputCosts, ModelParams, Preferences

log = get_logger(__name__)


def _require_positive(name: str, value: float) -> None:
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


def _unit_cost_index(tech: FirmTechnology, costs: InputCosts, chi_I: int) -> float:
    """1 + η[(1−χ_I)δ + χ_I δ̃]."""
    delta = costs.delta_tilde if chi_I else costs.delta
    return 1.0 + tech.eta * delta


# ── Pricing and profit ───────────────────────────────────

def marginal_cost(tech: FirmTechnology, costs: InputCosts, lam: float, chi_I: int = 0) -> float:
    _require_positive("lambda", lam)
    return _unit_cost_index(tech, costs, chi_I) / lam


def optimal_price(c: float, prefs: Preferences) -> float:
    """Constant CES markup p = c/ρ."""
    _require_positive("marginal cost", c)
    return c / prefs.rho


def gross_profit_coefficient(prefs: Preferences) -> float:
    """(1−ρ)·ρ^(ρ/(1−ρ))·A, the factor in front of c^(ρ/(ρ−1))."""
    rho = prefs.rho
    return (1 - rho) * rho ** (rho / (1 - rho)) * prefs.A


def profit(params: ModelParams, lam: float, chi_I: int = 0) -> float:
    _require_positive("lambda", lam)
    rho = params.prefs.rho
    index = _unit_cost_index(params.tech, params.costs, chi_I)
    gross = gross_profit_coefficient(params.prefs) * index ** (rho / (rho - 1)) * lam ** (rho / (1 - rho))
    return gross - params.tech.f - params.tech.f_I * chi_I


def profit_gap(params: ModelParams, lam: float) -> float:
    """π(λ, χ_I=1) − π(λ, χ_I=0)."""
    return profit(params, lam, 1) - profit(params, lam, 0)


# ── Cutoffs ──────────────────────────────────────────────

def _cutoff_prefactor(prefs: Preferences) -> float:
    """(1−ρ)^(−(1−ρ)/ρ)·ρ⁻¹·A^(−(1−ρ)/ρ)."""
    rho = prefs.rho
    s = (1 - rho) / rho
    return (1 - rho) ** (-s) / rho * prefs.A ** (-s)


def entry_cutoff(params: ModelParams) -> float:
    rho = params.prefs.rho
    s = (1 - rho) / rho
    return _cutoff_prefactor(params.prefs) * (1 + params.tech.eta * params.costs.delta) * params.tech.f ** s


def ofdi_cutoff(params: ModelParams) -> Optional[float]:
    """λ* from π₁ = π₀; None unless δ > δ̃ and η > 0."""
    costs, tech = params.costs, params.tech
    if costs.delta <= costs.delta_tilde or tech.eta == 0:
        return None
    rho = params.prefs.rho
    s = (1 - rho) / rho
    e = rho / (rho - 1)
    spread = (1 + tech.eta * costs.delta_tilde) ** e - (1 + tech.eta * costs.delta) ** e
    if spread <= 0:  # δ barely above δ̃: spread underflows
        return math.inf
    return _cutoff_prefactor(params.prefs) * spread ** (-s) * tech.f_I ** s


def cutoffs(params: ModelParams) -> Cutoffs:
    return Cutoffs(lambda_entry=entry_cutoff(params), lambda_ofdi=ofdi_cutoff(params))


def _classify(lambdas: np.ndarray, lam_entry: float, lam_ofdi: Optional[float]) -> np.ndarray:
    """0 = no entry, 1 = domestic only, 2 = vertical OFDI."""
    codes = np.where(lambdas < lam_entry, 0, 1)
    if lam_ofdi is not None:
        codes = np.where((codes == 1) & (lambdas > lam_ofdi), 2, codes)
    return codes


_OUTCOMES = (EntryOutcome.NO_ENTRY, EntryOutcome.DOMESTIC_ONLY, EntryOutcome.VERTICAL_OFDI)


def decide(params: ModelParams, lam: float) -> EntryOutcome:
    _require_positive("lambda", lam)
    code = _classify(np.array([lam]), entry_cutoff(params), ofdi_cutoff(params))[0]
    return _OUTCOMES[int(code)]


# ── OFDI probability and comparative statics ─────────────

def _exponents(params: ModelParams) -> tuple[float, float]:
    rho, alpha = params.prefs.rho, params.pareto.shape
    return alpha * (1 - rho) / rho, rho / (rho - 1)


def _cost_ratio_terms(params: ModelParams) -> tuple[float, float]:
    """(r, x) for the current δ."""
    eta, costs = params.tech.eta, params.costs
    _, e = _exponents(params)
    r = (1 + eta * costs.delta_tilde) / (1 + eta * costs.delta)
    return r, r**e - 1.0


def _no_cost_channel(params: ModelParams) -> bool:
    return params.tech.eta == 0 or params.costs.delta <= params.costs.delta_tilde


def _is_saturated(params: ModelParams) -> bool:
    _, x = _cost_ratio_terms(params)
    return x * params.tech.f / params.tech.f_I >= 1.0


def ofdi_probability(params: ModelParams) -> float:
    """P(χ_I = 1 | entry), clamped to [0, 1]."""
    if _no_cost_channel(params):
        return 0.0
    k, _ = _exponents(params)
    _, x = _cost_ratio_terms(params)
    ratio = x * params.tech.f / params.tech.f_I
    if ratio >= 1.0:
        return 1.0
    return float(min(1.0, max(0.0, ratio**k)))


def saturation_threshold(params: ModelParams) -> float:
    """δ at which the OFDI probability first reaches 1."""
    tech = params.tech
    if tech.eta == 0:
        raise DomainError("saturation threshold is undefined for eta = 0")
    rho = params.prefs.rho
    return (1 + tech.f_I / tech.f) ** ((1 - rho) / rho) * (1 + tech.eta * params.costs.delta_tilde) / tech.eta - 1 / tech.eta


def _slope_common(params: ModelParams) -> float:
    """α(f/f_I)ᵏ x^(k−1) r^(e−1), shared by both derivatives."""
    k, e = _exponents(params)
    r, x = _cost_ratio_terms(params)
    alpha = params.pareto.shape
    return alpha * (params.tech.f / params.tech.f_I) ** k * x ** (k - 1) * r ** (e - 1)


def marginal_effect_delta(params: ModelParams) -> float:
    """∂P/∂δ; zero at or below δ̃ and once saturated."""
    if _no_cost_channel(params) or _is_saturated(params):
        return 0.0
    eta, costs = params.tech.eta, params.costs
    return _slope_common(params) * eta * (1 + eta * costs.delta_tilde) / (1 + eta * costs.delta) ** 2


def marginal_effect_eta(params: ModelParams) -> float:
    """∂P/∂η; at δ = δ_H this is the η-sensitivity of the discrete jump."""
    if _no_cost_channel(params) or _is_saturated(params):
        return 0.0
    eta, costs = params.tech.eta, params.costs
    return _slope_common(params) * (costs.delta - costs.delta_tilde) / (1 + eta * costs.delta) ** 2


def discrete_jump(params: ModelParams, delta_low: float, delta_high: float) -> float:
    """ΔP for a cost move from δ_L <= δ̃ to δ_H > δ̃."""
    delta_tilde = params.costs.delta_tilde
    if delta_low > delta_tilde or delta_high <= delta_tilde:
        raise DomainError(
            f"need delta_low <= {delta_tilde} < delta_high, got ({delta_low}, {delta_high})"
        )
    return ofdi_probability(params.with_delta(delta_high)) - ofdi_probability(params.with_delta(delta_low))


# ── Curves and simulation oracle ─────────────────────────

def probability_curve(params: ModelParams, deltas: Iterable[float], etas: Iterable[float]) -> pd.DataFrame:
    """Long table (eta, delta, probability) over a δ grid for each η."""
    rows = []
    deltas = list(deltas)
    for eta in etas:
        base = params.with_tech(params.tech.model_copy(update={"eta": float(eta)}))
        for delta in deltas:
            rows.append({
                "eta": float(eta),
                "delta": float(delta),
                "probability": ofdi_probability(base.with_delta(float(delta))),
            })
    return pd.DataFrame(rows, columns=["eta", "delta", "probability"])


def monte_carlo_probability(
    params: ModelParams, rng: np.random.Generator, n_draws: int = 1_000_000,
) -> tuple[float, float]:
    """Share of simulated entrants choosing vertical OFDI, with its binomial SE.

    Entrants are drawn from the Pareto truncated at the entry cutoff and then
    classified with the same rule as :func:`decide`.
    """
    lam_entry = entry_cutoff(params)
    lambdas = pareto_draws(truncated(params.pareto, lam_entry), rng, n_draws)
    codes = _classify(lambdas, lam_entry, ofdi_cutoff(params))
    share = float(np.mean(codes == 2))
    se = math.sqrt(max(share * (1 - share), 0.0) / n_draws)
    log.debug("monte_carlo_probability", share=share, se=se, n_draws=n_draws)
    return share, se


def probability_check(
    params: ModelParams,
    deltas: Iterable[float],
    etas: Iterable[float],
    rng: np.random.Generator,
    n_draws: int,
) -> pd.DataFrame:
    """Closed-form P and its slopes next to a simulated share at each grid point.

    ``z`` is the gap between simulated and closed-form P in units of the
    binomial SE at the closed-form P (zero where P is 0 or 1).
    """
    rows = []
    deltas = list(deltas)
    for eta in etas:
        base = params.with_tech(params.tech.model_copy(update={"eta": float(eta)}))
        for delta in deltas:
            point = base.with_delta(float(delta))
            p = ofdi_probability(point)
            share, se = monte_carlo_probability(point, rng, n_draws)
            exact_se = math.sqrt(p * (1 - p) / n_draws)
            rows.append({
                "eta": float(eta),
                "delta": float(delta),
                "probability": p,
                "dP_ddelta": marginal_effect_delta(point),
                "dP_deta": marginal_effect_eta(point),
                "mc_share": share,
                "mc_se": se,
                "z": (share - p) / exact_se if exact_se > 0 else 0.0,
            })
    log.info("probability_check", points=len(rows), n_draws=n_draws,
             max_abs_z=max((abs(r["z"]) for r in rows), default=0.0))
    return pd.DataFrame(rows, columns=["eta", "delta", "probability", "dP_ddelta", "dP_deta", "mc_share", "mc_se", "z"])
