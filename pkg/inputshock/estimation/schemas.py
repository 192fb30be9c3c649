"""Pydantic models for difference-in-differences specifications and results."""

from __future__ import annotations

from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..numerics.regression import CovMode

COVARIATES = ("size", "roa", "age")


# ── Enums ────────────────────────────────────────────────

class ControlLevel(str, Enum):
    """Build-up of firm controls, from none to the full quadratic."""

    NONE = "none"
    SIZE = "size"
    SIZE_ROA = "size_roa"
    SIZE_ROA_AGE = "size_roa_age"
    FULL_POLYNOMIAL = "full_polynomial"

    @property
    def covariates(self) -> tuple[str, ...]:
        return {
            ControlLevel.NONE: (),
            ControlLevel.SIZE: ("size",),
            ControlLevel.SIZE_ROA: ("size", "roa"),
            ControlLevel.SIZE_ROA_AGE: COVARIATES,
            ControlLevel.FULL_POLYNOMIAL: COVARIATES,
        }[self]


BUILDUP_LEVELS = list(ControlLevel)


# ── Specification ────────────────────────────────────────

class PretrendControls(BaseModel):
    """Pre-policy level and change of baseline covariates, times a polynomial in time."""

    model_config = ConfigDict(frozen=True)

    covariates: List[str] = Field(default_factory=lambda: ["size"], min_length=1)
    degree: int = Field(default=4, ge=1)

    @field_validator("covariates")
    @classmethod
    def _known(cls, v: List[str]) -> List[str]:
        unknown = [c for c in v if c not in COVARIATES]
        if unknown:
            raise ValueError(f"unknown baseline covariates {unknown}; expected a subset of {COVARIATES}")
        return list(dict.fromkeys(v))


class DidSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    post_year: int = 2017
    include_policy_year: bool = True
    control_level: ControlLevel = ControlLevel.NONE
    polynomial_degree: Literal[2] = 2
    pretrend_controls: Optional[PretrendControls] = None
    cov_mode: Optional[CovMode] = None  # None: cluster at firm level, HAC at aggregate level
    year_effects: bool = True  # event study only
    base_year: Optional[int] = None  # event study; None = first sample year

    @property
    def first_post_year(self) -> int:
        return self.post_year if self.include_policy_year else self.post_year + 1


# ── Results ──────────────────────────────────────────────

class DidResult(BaseModel):
    level: Literal["firm", "aggregate"] = "firm"
    control_level: ControlLevel = ControlLevel.NONE
    beta2: float
    beta2_se: float = Field(ge=0)
    t_stat: float
    p_value: float = Field(ge=0, le=1)
    ci_low: float
    ci_high: float
    confidence_level: float
    beta1: Optional[float] = None  # None when dP is partialled out
    beta1_se: Optional[float] = None
    control_coefficients: Dict[str, float] = Field(default_factory=dict)
    control_std_errors: Dict[str, float] = Field(default_factory=dict)
    r_squared: float
    residual_variance: float
    n_obs: int
    n_firms: int
    n_units: int
    n_dropped_missing: int = 0
    columns: List[str] = Field(default_factory=list)
    dropped_columns: List[str] = Field(default_factory=list)
    cov_kind: str = "cluster"
    df: float = Field(gt=0)  # t degrees of freedom for beta2 (Bell-McCaffrey under CR2)
    coefficient_df: Dict[str, float] = Field(default_factory=dict)

    @property
    def beta1_partialled_out(self) -> bool:
        return self.beta1 is None


class EventCoefficient(BaseModel):
    year: int
    coef: float
    se: float = Field(ge=0)
    df: float = Field(gt=0)
    p_value: float = Field(ge=0, le=1)


class WaldTest(BaseModel):
    """Joint zero test; p_value carries the small-sample F correction under clustering."""

    statistic: float = Field(ge=0)
    df: int = Field(ge=0)
    p_value: float = Field(ge=0, le=1)
    chi2_p_value: float = Field(default=1.0, ge=0, le=1)
    restrictions: int = Field(default=0, ge=0)  # coefficients tested; df is lower when V is rank-deficient


class EventStudyResult(BaseModel):
    base_year: int
    coefficients: List[EventCoefficient]
    pre_policy_years: List[int]
    pre_policy_wald: WaldTest
    n_obs: int
    n_firms: int
    dropped_columns: List[str] = Field(default_factory=list)

    def coefficient(self, year: int) -> Optional[EventCoefficient]:
        return next((c for c in self.coefficients if c.year == year), None)


class AggregateRow(BaseModel):
    group: Literal[0, 1]
    year: int
    p_hat: Optional[float] = Field(default=None, ge=0, le=1)
    n_firms: int = Field(ge=0)
