"""Pydantic models for the upstream intermediate-input market."""

from __future__ import annotations

from enum import Enum
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..model.schemas import FirmTechnology, InputCosts, ModelParams, Preferences, check_integrability
from ..numerics.pareto import ParetoDist

_WEIGHT_TOL = 1e-12


# ── Enums ────────────────────────────────────────────────

class Regime(str, Enum):
    REGIME1 = "regime1"  # both equilibria at or below δ̃
    REGIME2 = "regime2"  # ban pushes δ* across δ̃
    REGIME3 = "regime3"  # already above δ̃ before the ban
    NOT_CLASSIFIED = "not_classified"


# ── Market primitives ────────────────────────────────────

class MixtureComponent(BaseModel):
    model_config = ConfigDict(frozen=True)

    tech: FirmTechnology
    weight: float = Field(gt=0, le=1)


class FirmTypeMixture(BaseModel):
    """Discrete distribution over (η, f, f_I); one unit mass of potential entrants per component."""

    model_config = ConfigDict(frozen=True)

    components: List[MixtureComponent] = Field(min_length=1)

    @model_validator(mode="after")
    def _weights_sum_to_one(self) -> "FirmTypeMixture":
        total = sum(c.weight for c in self.components)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"mixture weights must sum to 1, got {total!r}")
        return self

    @classmethod
    def single(cls, tech: FirmTechnology) -> "FirmTypeMixture":
        return cls(components=[MixtureComponent(tech=tech, weight=1.0)])


class SupplyCurve(BaseModel):
    """Isoelastic supply s·δ^γ; the ban lowers the scale from s₁ to s₀."""

    model_config = ConfigDict(frozen=True)

    scale_allowed: float = Field(default=0.016, gt=0)  # s₁
    scale_banned: float = Field(default=0.001, gt=0)  # s₀
    elasticity: float = Field(default=1.0, gt=0)  # γ

    @model_validator(mode="after")
    def _ban_lowers_supply(self) -> "SupplyCurve":
        if self.scale_banned > self.scale_allowed:
            raise ValueError(
                f"scale_banned ({self.scale_banned}) must not exceed scale_allowed ({self.scale_allowed})"
            )
        return self


class MarketConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    prefs: Preferences = Field(default_factory=Preferences)
    pareto: ParetoDist = Field(default_factory=ParetoDist)
    delta_tilde: float = Field(default=2.0, gt=0)
    mixture: FirmTypeMixture = Field(
        default_factory=lambda: FirmTypeMixture.single(FirmTechnology(eta=1.0, f=1.0, f_I=1.0))
    )
    supply: SupplyCurve = Field(default_factory=SupplyCurve)

    @model_validator(mode="after")
    def _check_shape(self) -> "MarketConfig":
        check_integrability(self.prefs.rho, self.pareto.shape)
        return self

    def firm_params(self, tech: FirmTechnology, delta: float) -> ModelParams:
        """Single-firm view of one mixture component at domestic cost δ."""
        return ModelParams(
            prefs=self.prefs,
            pareto=self.pareto,
            costs=InputCosts(delta=delta, delta_tilde=self.delta_tilde),
            tech=tech,
        )


# ── Results ──────────────────────────────────────────────

class Equilibrium(BaseModel):
    delta_star: float = Field(gt=0)
    quantity: float = Field(ge=0)
    regime: Regime = Regime.NOT_CLASSIFIED
    p_ofdi: float = Field(ge=0, le=1)
    ban_active: bool = False


class ComponentShift(BaseModel):
    """Per-type OFDI probability before and after the ban."""

    eta: float
    f: float
    f_I: float
    weight: float
    p_before: float = Field(ge=0, le=1)
    p_after: float = Field(ge=0, le=1)
    delta_p: float
    saturated_before: bool


class PolicyExperimentResult(BaseModel):
    before: Equilibrium
    after: Equilibrium
    regime: Regime
    delta_p_ofdi: float
    component_delta_p: List[ComponentShift] = Field(default_factory=list)


# ── Demo markets ─────────────────────────────────────────

def _single_type(eta: float, s_allowed: float, s_banned: float) -> MarketConfig:
    return MarketConfig(
        prefs=Preferences(rho=0.5, A=1.0),
        pareto=ParetoDist(scale=1.0, shape=2.0),
        delta_tilde=2.0,
        mixture=FirmTypeMixture.single(FirmTechnology(eta=eta, f=1.0, f_I=1.0)),
        supply=SupplyCurve(scale_allowed=s_allowed, scale_banned=s_banned, elasticity=1.0),
    )


def demo_market(kind: str = "regime2") -> MarketConfig:
    """Reference markets (ρ=0.5, α=2, λ_m=A=1, f=f_I=1, δ̃=2, γ=1).

    ``regime1``: δ* ≈ 0.99 → 1.49. ``regime2``: δ* ≈ 0.99 → 2.49.
    ``regime3``: δ* ≈ 2.49 → 3.2. ``structural``: η=2, δ* crosses to 3.5
    where P = 0.36. ``saturated``: equal mix of η=10 (saturated past 4.1)
    and η=1, both equilibria inside (4.1, 5).
    """
    if kind == "regime1":
        return _single_type(1.0, 0.016, 0.0055)
    if kind == "regime2":
        return _single_type(1.0, 0.016, 0.001)
    if kind == "regime3":
        return _single_type(1.0, 0.001, 0.0003)
    if kind == "structural":
        return _single_type(2.0, 0.01, 0.25 / 512 * 0.4 / 3.5)
    if kind == "saturated":
        return MarketConfig(
            mixture=FirmTypeMixture(components=[
                MixtureComponent(tech=FirmTechnology(eta=10.0, f=1.0, f_I=1.0), weight=0.5),
                MixtureComponent(tech=FirmTechnology(eta=1.0, f=1.0, f_I=1.0), weight=0.5),
            ]),
            supply=SupplyCurve(scale_allowed=2.3e-5, scale_banned=1.0e-5, elasticity=1.0),
        )
    raise ValueError(f"unknown demo market: {kind!r}")
