"""Firm-level difference-in-differences and the event-study pre-trend test."""

from __future__ import annotations

import math
from typing import Iterable, Optional

import numpy as np
import pandas as pd
from scipy import stats

from ..config import settings
from ..data.schemas import PanelData
from ..errors import AllColumnsDroppedError, DomainError, InsufficientObservationsError, SingularCovarianceError
from ..numerics.regression import (
    CovMode,
    RegressionFit,
    clustered_wald_pvalue,
    fe_ols,
    wald_joint,
    wald_reduced_rank,
)
from ..utils.logging_config import get_logger
from .design import (
    POST,
    TREATMENT,
    build_design,
    check_post_year,
    control_columns,
    listwise,
    panel_frame,
    pretrend_columns,
)
from .schemas import (
    BUILDUP_LEVELS,
    ControlLevel,
    DidResult,
    DidSpec,
    EventCoefficient,
    EventStudyResult,
    WaldTest,
)

log = get_logger(__name__)


def t_inference(beta: float, se: float, df: float, level: Optional[float] = None) -> tuple[float, float, float, float]:
    """(t, two-sided p, CI low, CI high) from a t distribution with ``df`` degrees of freedom."""
    level = level if level is not None else settings.confidence_level
    if se == 0:
        t = 0.0 if beta == 0 else math.copysign(math.inf, beta)
        return t, 1.0 if beta == 0 else 0.0, beta, beta
    t = beta / se
    p = float(min(1.0, 2 * stats.t.sf(abs(t), df)))
    half = float(stats.t.ppf(0.5 + level / 2, df)) * se
    return t, p, beta - half, beta + half


def result_from_fit(
    fit: RegressionFit,
    *,
    level: str,
    control_level: ControlLevel,
    n_firms: int,
    n_dropped: int,
    columns: list[str],
) -> DidResult:
    """Package a fit whose design holds dP and dP:dT."""
    if TREATMENT not in fit.coefficients.index:
        raise InsufficientObservationsError(f"{TREATMENT} is not identified (no treated variation after demeaning)")
    se = fit.std_errors
    beta2, beta2_se = float(fit.coefficients[TREATMENT]), float(se[TREATMENT])
    df = fit.df_for(TREATMENT)
    t, p, lo, hi = t_inference(beta2, beta2_se, df)
    controls = [c for c in fit.coefficients.index if c not in (POST, TREATMENT)]
    has_post = POST in fit.coefficients.index
    return DidResult(
        level=level,
        control_level=control_level,
        beta2=beta2,
        beta2_se=beta2_se,
        t_stat=t,
        p_value=p,
        ci_low=lo,
        ci_high=hi,
        confidence_level=settings.confidence_level,
        beta1=float(fit.coefficients[POST]) if has_post else None,
        beta1_se=float(se[POST]) if has_post else None,
        control_coefficients={c: float(fit.coefficients[c]) for c in controls},
        control_std_errors={c: float(se[c]) for c in controls},
        r_squared=fit.r_squared,
        residual_variance=fit.residual_variance,
        n_obs=fit.n_obs,
        n_firms=n_firms,
        n_units=fit.n_units,
        n_dropped_missing=n_dropped,
        columns=columns,
        dropped_columns=fit.dropped_columns,
        cov_kind=fit.cov_kind,
        df=df,
        coefficient_df={c: fit.df_for(c) for c in fit.coefficients.index},
    )


def estimate_did(panel: PanelData, spec: Optional[DidSpec] = None) -> DidResult:
    """Linear probability DID with firm fixed effects, clustered by firm."""
    spec = spec or DidSpec()
    design = build_design(panel, spec)
    fit = fe_ols(design.y, design.X, design.unit_ids,
                 cov_mode=spec.cov_mode or CovMode.cluster(), time_ids=design.time_ids)
    result = result_from_fit(
        fit,
        level="firm",
        control_level=spec.control_level,
        n_firms=int(pd.unique(design.unit_ids).size),
        n_dropped=design.n_dropped,
        columns=list(design.X.columns),
    )
    log.info("did_estimated", control_level=spec.control_level.value, beta2=result.beta2,
             se=result.beta2_se, n_obs=result.n_obs)
    return result


def estimate_buildup(
    panel: PanelData,
    spec: Optional[DidSpec] = None,
    levels: Optional[Iterable[ControlLevel]] = None,
    skip_unidentified: bool = False,
) -> list[DidResult]:
    """One DID per control level, from no controls to the full quadratic.

    With ``skip_unidentified`` a level whose design is empty or rank-deficient
    in the treatment column is logged and left out instead of raising.
    """
    spec = spec or DidSpec()
    results = []
    for lvl in (levels if levels is not None else BUILDUP_LEVELS):
        try:
            results.append(estimate_did(panel, spec.model_copy(update={"control_level": lvl})))
        except (InsufficientObservationsError, AllColumnsDroppedError) as exc:
            if not skip_unidentified:
                raise
            log.warning("buildup_level_skipped", control_level=lvl.value, reason=str(exc))
    return results


# ── Event study ──────────────────────────────────────────

def _interaction(year: int) -> str:
    return f"dT:{year}"


def _pretrend_wald(fit: RegressionFit, columns: list[str]) -> WaldTest:
    """Joint zero test on the pre-policy interactions.

    A rank-deficient block (few clusters with pre-period variation) is tested
    on its nonzero eigen-directions with df equal to the rank.
    """
    try:
        stat, chi2_p = wald_joint(fit, columns)
        df = len(columns)
    except SingularCovarianceError:
        stat, chi2_p, df = wald_reduced_rank(fit, columns)
    p = clustered_wald_pvalue(stat, df, fit.n_units) if fit.cov_kind == "cluster" else chi2_p
    return WaldTest(statistic=stat, df=df, p_value=p, chi2_p_value=chi2_p, restrictions=len(columns))


def event_study(panel: PanelData, spec: Optional[DidSpec] = None, base_year: Optional[int] = None) -> EventStudyResult:
    """Year-by-treatment interactions (base year omitted) and a joint pre-policy test.

    Calendar-year dummies enter when ``spec.year_effects`` is set; they absorb
    common shocks, which also absorbs dP.
    """
    spec = spec or DidSpec()
    df = panel_frame(panel)
    check_post_year(df, spec)
    years = sorted(int(y) for y in df["year"].unique())
    base = base_year if base_year is not None else (spec.base_year if spec.base_year is not None else years[0])
    if base not in years:
        raise DomainError(f"base year {base} is not a sample year ({years[0]}-{years[-1]})")
    others = [y for y in years if y != base]

    treated = df["group"].astype(float)
    cols = {_interaction(y): (df["year"] == y).astype(float) * treated for y in others}
    if spec.year_effects:
        cols.update({f"year:{y}": (df["year"] == y).astype(float) for y in others})
    parts = [pd.DataFrame(cols, index=df.index), control_columns(df, spec.control_level)]
    if spec.pretrend_controls is not None:
        parts.append(pretrend_columns(df, spec.pretrend_controls, spec.post_year))
    X = pd.concat(parts, axis=1)
    keep = listwise(X)
    if not keep.any():
        raise InsufficientObservationsError("no rows left after dropping missing covariates")
    df, X = df[keep], X[keep].astype("float64")

    fit = fe_ols(df["ofdi"].astype(float), X, df["firm_id"].to_numpy(),
                 cov_mode=spec.cov_mode or CovMode.cluster(), time_ids=df["year"].to_numpy())
    se = fit.std_errors
    coefficients = []
    for y in others:
        name = _interaction(y)
        if name not in fit.coefficients.index:
            continue
        coef, coef_se, coef_df = float(fit.coefficients[name]), float(se[name]), fit.df_for(name)
        _, p, _, _ = t_inference(coef, coef_se, coef_df)
        coefficients.append(EventCoefficient(year=y, coef=coef, se=coef_se, df=coef_df, p_value=p))
    pre_years = [c.year for c in coefficients if c.year < spec.post_year]
    pre_outcome = df.loc[df["year"] < spec.post_year, "ofdi"]
    if pre_years and pre_outcome.nunique() <= 1:
        # constant pre-policy outcome leaves a rank-one pre block in V
        log.info("pretrend_outcome_constant", pre_years=len(pre_years))
        wald = WaldTest(statistic=0.0, df=len(pre_years), p_value=1.0, chi2_p_value=1.0,
                        restrictions=len(pre_years))
    elif pre_years:
        wald = _pretrend_wald(fit, [_interaction(y) for y in pre_years])
    else:
        wald = WaldTest(statistic=0.0, df=0, p_value=1.0)

    log.info("event_study_estimated", base_year=base, pre_years=len(pre_years),
             wald=wald.statistic, p_value=wald.p_value)
    return EventStudyResult(
        base_year=base,
        coefficients=coefficients,
        pre_policy_years=pre_years,
        pre_policy_wald=wald,
        n_obs=fit.n_obs,
        n_firms=int(np.unique(df["firm_id"].to_numpy()).size),
        dropped_columns=fit.dropped_columns,
    )
