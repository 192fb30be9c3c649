"""Heterogeneous-firm model of vertical outward FDI under an input-cost shock."""

from .firm import (
    cutoffs,
    decide,
    discrete_jump,
    entry_cutoff,
    gross_profit_coefficient,
    marginal_cost,
    marginal_effect_delta,
    marginal_effect_eta,
    monte_carlo_probability,
    ofdi_cutoff,
    ofdi_probability,
    optimal_price,
    probability_check,
    probability_curve,
    profit,
    profit_gap,
    saturation_threshold,
)
from .schemas import (
    Cutoffs,
    EntryOutcome,
    FirmTechnology,
    InputCosts,
    ModelParams,
    Preferences,
    check_integrability,
)

__all__ = [
    "Preferences",
    "FirmTechnology",
    "InputCosts",
    "ModelParams",
    "Cutoffs",
    "EntryOutcome",
    "check_integrability",
    "marginal_cost",
    "optimal_price",
    "gross_profit_coefficient",
    "profit",
    "profit_gap",
    "entry_cutoff",
    "ofdi_cutoff",
    "cutoffs",
    "decide",
    "ofdi_probability",
    "saturation_threshold",
    "marginal_effect_delta",
    "marginal_effect_eta",
    "discrete_jump",
    "probability_curve",
    "monte_carlo_probability",
    "probability_check",
]
