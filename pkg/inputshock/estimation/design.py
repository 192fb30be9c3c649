"""Design matrices for the firm-level DID and event-study regressions."""

from __future__ import annotations

from itertools import combinations
from typing import NamedTuple

import numpy as np
import pandas as pd

from ..data.schemas import PanelData
from ..errors import DomainError, InsufficientObservationsError
from ..utils.logging_config import get_logger
from .schemas import ControlLevel, DidSpec, PretrendControls

log = get_logger(__name__)

TREATMENT = "dP:dT"
POST = "dP"


class Design(NamedTuple):
    y: pd.Series
    X: pd.DataFrame
    unit_ids: np.ndarray
    time_ids: np.ndarray
    n_dropped: int  # rows lost to missing covariates


_SIGNATURE_COLUMNS = ["group", "ofdi", "size", "roa", "age"]


def panel_frame(panel: PanelData) -> pd.DataFrame:
    """Rows grouped by firm, year order within firm, firms ordered by their data.

    The firm order comes from each firm's full year-by-year record, never from
    its label, so relabelling firms or permuting rows leaves every fit
    bit-identical.
    """
    df = panel.to_frame()
    if df.empty:
        return df
    wide = df.pivot(index="firm_id", columns="year", values=_SIGNATURE_COLUMNS).astype("float64")
    keys = np.nan_to_num(wide.to_numpy(), nan=-np.inf)  # gaps sort first
    rank = pd.Series(np.lexsort(keys.T[::-1]).argsort(), index=wide.index)
    df["firm_rank"] = df["firm_id"].map(rank)
    df = df.sort_values(["firm_rank", "year"], kind="mergesort")
    return df.drop(columns="firm_rank").reset_index(drop=True)


def check_post_year(df: pd.DataFrame, spec: DidSpec) -> None:
    if df.empty:
        raise InsufficientObservationsError("panel has no rows")
    lo, hi = int(df["year"].min()), int(df["year"].max())
    if not lo < spec.post_year <= hi or spec.first_post_year > hi:
        raise DomainError(f"post_year {spec.post_year} leaves no pre or post period in [{lo}, {hi}]")


def treatment_columns(df: pd.DataFrame, spec: DidSpec) -> pd.DataFrame:
    dP = (df["year"] >= spec.first_post_year).astype(float)
    return pd.DataFrame({POST: dP, TREATMENT: dP * df["group"].astype(float)}, index=df.index)


def control_columns(df: pd.DataFrame, level: ControlLevel) -> pd.DataFrame:
    """Covariate levels, then (full polynomial only) squares and pairwise products."""
    covs = level.covariates
    out = pd.DataFrame({c: df[c].astype("float64") for c in covs}, index=df.index)
    if level is ControlLevel.FULL_POLYNOMIAL:
        for c in covs:
            out[f"{c}^2"] = out[c] ** 2
        for a, b in combinations(covs, 2):
            out[f"{a}:{b}"] = out[a] * out[b]
    return out


def pretrend_columns(df: pd.DataFrame, pre: PretrendControls, post_year: int) -> pd.DataFrame:
    """Baseline level and change (last two observed pre-policy years) times tᵖ, t scaled to [0, 1].

    Firms without two pre-policy observations get NaN and drop out listwise.
    """
    years = df["year"].astype(float)
    span = years.max() - years.min()
    t = (years - years.min()) / span if span > 0 else years * 0.0
    out = {}
    for c in pre.covariates:
        obs = df[(df["year"] < post_year) & df[c].notna()].sort_values(["firm_id", "year"])
        tail = obs.groupby("firm_id", sort=False).tail(2).groupby("firm_id", sort=False)[c]
        counts = tail.count()
        first = tail.first().astype("float64").where(counts == 2)
        change = tail.last().astype("float64").where(counts == 2) - first
        level_row = df["firm_id"].map(first).astype("float64")
        change_row = df["firm_id"].map(change).astype("float64")
        for p in range(1, pre.degree + 1):
            out[f"{c}_level:t^{p}"] = level_row * t**p
            out[f"{c}_change:t^{p}"] = change_row * t**p
    return pd.DataFrame(out, index=df.index)


def listwise(columns: pd.DataFrame) -> pd.Series:
    """Row mask with every listed column observed."""
    if columns.shape[1] == 0:
        return pd.Series(True, index=columns.index)
    return columns.notna().all(axis=1)


def build_design(panel: PanelData, spec: DidSpec) -> Design:
    """Outcome, regressors and firm ids for the firm-level DID."""
    df = panel_frame(panel)
    check_post_year(df, spec)

    parts = [treatment_columns(df, spec), control_columns(df, spec.control_level)]
    if spec.pretrend_controls is not None:
        parts.append(pretrend_columns(df, spec.pretrend_controls, spec.post_year))
    X = pd.concat(parts, axis=1)

    keep = listwise(X)
    n_dropped = int((~keep).sum())
    if n_dropped:
        log.info("rows_dropped_missing_covariates", rows=n_dropped, control_level=spec.control_level.value)
    if not keep.any():
        raise InsufficientObservationsError("no rows left after dropping missing covariates")

    df, X = df[keep], X[keep].astype("float64")
    return Design(
        y=df["ofdi"].astype("float64"),
        X=X,
        unit_ids=df["firm_id"].to_numpy(),
        time_ids=df["year"].to_numpy(),
        n_dropped=n_dropped,
    )
