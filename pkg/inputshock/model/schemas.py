"""Pydantic models for the firm's problem."""

from __future__ import annotations

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import IntegrabilityError
from ..numerics.pareto import ParetoDist
from ..utils.logging_config import get_logger

log = get_logger(__name__)


# ── Enums ────────────────────────────────────────────────

class EntryOutcome(str, Enum):
    NO_ENTRY = "no_entry"
    DOMESTIC_ONLY = "domestic_only"
    VERTICAL_OFDI = "vertical_ofdi"


# ── Parameter blocks ─────────────────────────────────────

class Preferences(BaseModel):
    model_config = ConfigDict(frozen=True)

    rho: float = Field(default=0.5, gt=0, lt=1)  # CES parameter
    A: float = Field(default=1.0, gt=0)  # demand shifter


class FirmTechnology(BaseModel):
    model_config = ConfigDict(frozen=True)

    eta: float = Field(default=1.0, ge=0)  # input units per worker
    f: float = Field(default=1.0, gt=0)  # fixed production cost
    f_I: float = Field(default=1.0, gt=0)  # fixed vertical-OFDI cost


class InputCosts(BaseModel):
    model_config = ConfigDict(frozen=True)

    delta: float = Field(default=2.0, ge=0)  # domestic unit cost δ
    delta_tilde: float = Field(default=2.0, gt=0)  # subsidiary unit cost δ̃


def check_integrability(rho: float, alpha: float) -> None:
    """Enforce α > ρ/(1−ρ); also flag the weaker α > (1−ρ)/ρ reading."""
    bound = rho / (1 - rho)
    if alpha <= bound:
        raise IntegrabilityError(
            f"Pareto shape α={alpha} must exceed ρ/(1-ρ)={bound:.6g} for finite aggregate demand"
        )
    if alpha <= (1 - rho) / rho:
        log.warning("pareto_shape_below_stated_bound", alpha=alpha, stated_bound=(1 - rho) / rho)


class ModelParams(BaseModel):
    """Everything the single-firm problem needs."""

    model_config = ConfigDict(frozen=True)

    prefs: Preferences = Field(default_factory=Preferences)
    pareto: ParetoDist = Field(default_factory=ParetoDist)
    costs: InputCosts = Field(default_factory=InputCosts)
    tech: FirmTechnology = Field(default_factory=FirmTechnology)

    @model_validator(mode="after")
    def _check_shape(self) -> "ModelParams":
        check_integrability(self.prefs.rho, self.pareto.shape)
        return self

    def with_delta(self, delta: float) -> "ModelParams":
        return self.model_copy(update={"costs": self.costs.model_copy(update={"delta": delta})})

    def with_tech(self, tech: FirmTechnology) -> "ModelParams":
        return self.model_copy(update={"tech": tech})

    @classmethod
    def figure4(cls, eta: float = 1.0, delta: float = 3.5) -> "ModelParams":
        """(α, ρ, δ̃, f, f_I) = (2, 0.5, 2, 1, 1) with λ_m = A = 1."""
        return cls(
            prefs=Preferences(rho=0.5, A=1.0),
            pareto=ParetoDist(scale=1.0, shape=2.0),
            costs=InputCosts(delta=delta, delta_tilde=2.0),
            tech=FirmTechnology(eta=eta, f=1.0, f_I=1.0),
        )


class Cutoffs(BaseModel):
    lambda_entry: float = Field(gt=0)  # λ̲
    lambda_ofdi: Optional[float] = Field(default=None, gt=0)  # λ*, absent when δ <= δ̃

    @property
    def is_sorted(self) -> bool:
        """λ* > λ̲ (false only past the saturation threshold)."""
        return self.lambda_ofdi is None or self.lambda_ofdi > self.lambda_entry
