"""Pydantic data models for firm-year panels."""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

from ..config import settings
from ..errors import AbsorbingViolationError, DuplicateKeyError, PanelSchemaError
from ..market.schemas import MarketConfig, Regime, demo_market

PANEL_COLUMNS = ["firm_id", "group", "year", "ofdi", "size", "roa", "age"]


# ── Enums ────────────────────────────────────────────────

class DgpMode(str, Enum):
    STRUCTURAL = "structural"
    REDUCED_FORM = "reduced_form"


# ── Configuration ────────────────────────────────────────

class CovariateTarget(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    sd: float = Field(gt=0)


class CovariateCalibration(BaseModel):
    """Sample moments to match; defaults are the observed listed-firm sample."""

    model_config = ConfigDict(frozen=True)

    size: CovariateTarget = CovariateTarget(mean=-0.7191, sd=1.2161)
    roa: CovariateTarget = CovariateTarget(mean=0.0394, sd=0.0358)
    age: CovariateTarget = CovariateTarget(mean=30.37, sd=21.66)
    size_persistence: float = Field(default_factory=lambda: settings.size_persistence, gt=-1, lt=1)
    roa_persistence: float = Field(default_factory=lambda: settings.roa_persistence, gt=-1, lt=1)
    size_between_share: float = Field(default_factory=lambda: settings.size_between_share, ge=0, le=1)
    roa_between_share: float = Field(default_factory=lambda: settings.roa_between_share, ge=0, le=1)


class MissingRates(BaseModel):
    """Per-row probability that a covariate is unreported."""

    model_config = ConfigDict(frozen=True)

    size: float = Field(default=0.0, ge=0, le=1)
    roa: float = Field(default=36 / 725, ge=0, le=1)
    age: float = Field(default=19 / 725, ge=0, le=1)


class PanelConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_treated: int = Field(default=20, gt=0)
    n_control: int = Field(default=22, gt=0)
    start_year: int = 2000
    end_year: int = 2023
    policy_year: int = 2017
    dgp_mode: DgpMode = DgpMode.REDUCED_FORM
    true_effect: float = 0.1639  # β₂, reduced form only
    per_year_hazard: Optional[float] = Field(default=None, ge=0, le=1)  # None = calibrate from β₂
    background_hazard: float = Field(default=0.0, ge=0, le=1)
    confounding_strength: float = 0.0
    covariates: CovariateCalibration = Field(default_factory=CovariateCalibration)
    missing_rates: MissingRates = Field(default_factory=MissingRates)
    attrition_rate: float = Field(default=0.05, ge=0, le=1)
    market: MarketConfig = Field(default_factory=lambda: demo_market("structural"))  # structural only
    seed: int = Field(default_factory=lambda: settings.random_seed)

    @model_validator(mode="after")
    def _check_years(self) -> "PanelConfig":
        if not self.start_year < self.policy_year < self.end_year:
            raise ValueError(
                f"policy_year {self.policy_year} must lie strictly inside "
                f"[{self.start_year}, {self.end_year}]"
            )
        return self

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    @property
    def n_post(self) -> int:
        """Post-period length, policy year included."""
        return self.end_year - self.policy_year + 1


# ── Rows and panels ──────────────────────────────────────

class PanelRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    firm_id: str
    group: Literal[0, 1]  # dT
    year: int
    ofdi: Literal[0, 1]  # cumulative indicator
    size: Optional[float] = None
    roa: Optional[float] = None
    age: Optional[int] = Field(default=None, ge=0)


class PanelMetadata(BaseModel):
    """Config echo plus the realized ground truth."""

    config: PanelConfig
    hazard: Optional[float] = None
    true_att_path: Dict[int, float] = Field(default_factory=dict)  # post year -> expected ATT
    expected_beta2: float = 0.0
    final_adoption_share: float = 0.0
    n_treated_realized: int = 0
    n_control_realized: int = 0
    n_adopters: int = 0
    regime: Optional[Regime] = None
    delta_before: Optional[float] = None
    delta_after: Optional[float] = None
    p_ofdi_before: Optional[float] = None
    p_ofdi_after: Optional[float] = None


def check_panel_frame(df: pd.DataFrame) -> None:
    """Raise on duplicate keys, gaps in a firm's years, a non-absorbing
    outcome, a firm switching group, or age not advancing with the year.

    Row numbers in messages are 1-based positions in ``df``.
    """
    if df.empty:
        return
    pos = pd.Series(np.arange(1, len(df) + 1), index=df.index)

    dup = df.duplicated(["firm_id", "year"], keep="first")
    if dup.any():
        first = dup.idxmax()
        raise DuplicateKeyError(
            f"row {pos[first]}: duplicate (firm_id, year) = ({df.at[first, 'firm_id']}, {df.at[first, 'year']})"
        )

    ordered = df.sort_values(["firm_id", "year"], kind="mergesort")
    by_firm = ordered.groupby("firm_id", sort=False)

    year_gap = by_firm["year"].diff()
    bad = year_gap.notna() & (year_gap != 1)
    if bad.any():
        idx = bad.idxmax()
        raise PanelSchemaError(f"row {pos[idx]}: firm {df.at[idx, 'firm_id']} has a gap before year {df.at[idx, 'year']}")

    drops = by_firm["ofdi"].diff() < 0
    if drops.any():
        idx = drops.idxmax()
        raise AbsorbingViolationError(
            f"row {pos[idx]}: ofdi returns to 0 for firm {df.at[idx, 'firm_id']} in year {df.at[idx, 'year']}"
        )

    switched = by_firm["group"].transform("nunique") > 1
    if switched.any():
        idx = switched.idxmax()
        raise PanelSchemaError(f"row {pos[idx]}: firm {df.at[idx, 'firm_id']} changes group")

    if "age" in ordered:
        age = ordered["age"].astype("Float64")
        age_step = age.groupby(ordered["firm_id"], sort=False).diff()
        mismatch = age_step.notna() & (age_step != 1)
        if mismatch.any():
            idx = mismatch.idxmax()
            raise PanelSchemaError(
                f"row {pos[idx]}: age of firm {df.at[idx, 'firm_id']} does not advance by one year"
            )


class PanelData(BaseModel):
    rows: List[PanelRow] = Field(default_factory=list)
    metadata: Optional[PanelMetadata] = None

    @model_validator(mode="after")
    def _check_rows(self, info: ValidationInfo) -> "PanelData":
        if not (info.context or {}).get("frame_checked"):
            check_panel_frame(self.to_frame())
        return self

    def to_frame(self) -> pd.DataFrame:
        """Rows as a DataFrame with nullable covariates."""
        df = pd.DataFrame([r.model_dump() for r in self.rows], columns=PANEL_COLUMNS)
        return df.astype({
            "firm_id": str, "group": "int64", "year": "int64", "ofdi": "int64",
            "size": "float64", "roa": "float64", "age": "Int64",
        })

    @classmethod
    def from_frame(cls, df: pd.DataFrame, metadata: Optional[PanelMetadata] = None) -> "PanelData":
        missing = [c for c in PANEL_COLUMNS if c not in df.columns]
        if missing:
            raise PanelSchemaError(f"missing columns: {missing}")
        check_panel_frame(df)
        rows = [PanelRow(**_clean(rec)) for rec in df[PANEL_COLUMNS].to_dict("records")]
        return cls.model_validate({"rows": rows, "metadata": metadata}, context={"frame_checked": True})

    @property
    def firm_ids(self) -> list[str]:
        return list(dict.fromkeys(r.firm_id for r in self.rows))

    def __len__(self) -> int:
        return len(self.rows)


def _clean(record: dict[str, Any]) -> dict[str, Any]:
    """Map pandas missing markers to None and numpy scalars to Python ones."""
    out: dict[str, Any] = {}
    for key, value in record.items():
        if value is None or (not isinstance(value, str) and pd.isna(value)):
            out[key] = None
        elif key in ("group", "year", "ofdi", "age"):
            out[key] = int(value)
        elif key in ("size", "roa"):
            out[key] = float(value)
        else:
            out[key] = str(value)
    return out
