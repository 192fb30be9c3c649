"""Synthetic firm-year panel generator.

Two outcome processes share one covariate and censoring layer:
- reduced form: treated firms adopt at a per-year hazard calibrated to a
  known average treatment effect on the cumulative OFDI indicator;
- structural: the export ban moves the input-market equilibrium, and
  treated firms whose productivity lies between the post- and pre-ban OFDI
  cutoffs adopt in a post year drawn uniformly.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
import pandas as pd

from ..config import settings
from ..errors import CalibrationError
from ..market.equilibrium import policy_experiment
from ..market.schemas import MarketConfig, PolicyExperimentResult, Regime
from ..model.firm import entry_cutoff, ofdi_cutoff
from ..numerics.pareto import pareto_quantile, truncated
from ..numerics.roots import bisect
from ..utils.logging_config import get_logger
from .schemas import PANEL_COLUMNS, CovariateCalibration, DgpMode, PanelConfig, PanelData, PanelMetadata

log = get_logger(__name__)


# ── Calibration ──────────────────────────────────────────

def average_adoption_share(hazard: float, n_post: int) -> float:
    """Post-period mean of 1 − (1−h)^s over s = 1..n_post."""
    s = np.arange(1, n_post + 1)
    return float(np.mean(1.0 - (1.0 - hazard) ** s))


def calibrate_hazard(beta2: float, n_post: int) -> float:
    """Per-year hazard whose post-period average adoption share equals β₂."""
    if not 0.0 <= beta2 <= 1.0:
        raise CalibrationError(f"true effect {beta2} is not reachable by a cumulative 0/1 outcome")
    if n_post < 1:
        raise CalibrationError("post period is empty")
    if beta2 in (0.0, 1.0):
        return beta2
    return bisect(lambda h: average_adoption_share(h, n_post) - beta2, 0.0, 1.0)


def _age_start_gamma(cal: CovariateCalibration, n_years: int) -> tuple[float, float]:
    """(shape, scale) of age-at-first-year minus one, so pooled age moments hit the targets."""
    mean0 = cal.age.mean - (n_years - 1) / 2 - 1
    var0 = cal.age.sd**2 - (n_years**2 - 1) / 12
    if mean0 <= 0 or var0 <= 0:
        raise CalibrationError(
            f"age target (mean {cal.age.mean}, sd {cal.age.sd}) is inconsistent with a {n_years}-year span"
        )
    return mean0**2 / var0, var0 / mean0


# ── Building blocks ──────────────────────────────────────

def _ar1_covariate(
    rng: np.random.Generator, n_firms: int, n_years: int,
    mean: float, sd: float, persistence: float, between_share: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Firm mean plus stationary AR(1) deviation; returns (values, firm means)."""
    firm_mean = mean + sd * math.sqrt(between_share) * rng.standard_normal(n_firms)
    sd_within = sd * math.sqrt(1.0 - between_share)
    shocks = rng.standard_normal((n_firms, n_years))
    dev = np.empty((n_firms, n_years))
    dev[:, 0] = sd_within * shocks[:, 0]
    innov_sd = sd_within * math.sqrt(1.0 - persistence**2)
    for t in range(1, n_years):
        dev[:, t] = persistence * dev[:, t - 1] + innov_sd * shocks[:, t]
    return firm_mean[:, None] + dev, firm_mean


def _observed_spans(rng: np.random.Generator, n_firms: int, n_years: int, attrition: float) -> tuple[np.ndarray, np.ndarray]:
    """Leading and trailing censored years per firm."""
    max_cut = int(settings.max_censor_fraction * n_years)
    if max_cut < 1 or attrition == 0:
        zeros = np.zeros(n_firms, dtype=int)
        return zeros, zeros.copy()
    lead = np.where(rng.random(n_firms) < attrition, rng.integers(1, max_cut + 1, n_firms), 0)
    trail = np.where(rng.random(n_firms) < attrition, rng.integers(1, max_cut + 1, n_firms), 0)
    trail = np.minimum(trail, n_years - 1 - lead)
    return lead, trail


def _cumulative(events: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(events.astype(np.int64), axis=1)


def _background_adoption(
    rng: np.random.Generator, n_firms: int, n_years: int, hazard: float, multiplier: np.ndarray,
) -> np.ndarray:
    u = rng.random((n_firms, n_years))
    if hazard == 0:
        return np.zeros((n_firms, n_years), dtype=np.int64)
    return _cumulative(u < np.minimum(1.0, hazard * multiplier)[:, None])


def _survival_share(market: MarketConfig, result: PolicyExperimentResult) -> float:
    """Expected adopter share among post-ban entrants of the mixture."""
    total = 0.0
    for c in market.mixture.components:
        after = market.firm_params(c.tech, result.after.delta_star)
        before = market.firm_params(c.tech, result.before.delta_star)
        lam_after = ofdi_cutoff(after)
        if lam_after is None:
            continue
        dist = truncated(market.pareto, entry_cutoff(after))
        lam_before = ofdi_cutoff(before)
        upper = dist.survival(lam_before) if lam_before is not None else 0.0
        total += c.weight * max(0.0, dist.survival(max(lam_after, dist.scale)) - upper)
    return total


def _structural_adoption(
    rng: np.random.Generator, config: PanelConfig, treated: np.ndarray,
) -> tuple[np.ndarray, float, PolicyExperimentResult]:
    """Adoption matrix driven by the ban-shifted OFDI cutoffs.

    A treated firm adopts when its productivity lies in (λ*_after, λ*_before],
    not whenever λ > λ*(δ_after): firms above λ*_before invest before the ban.
    """
    market = config.market
    years = config.years
    n_firms = treated.size
    result = policy_experiment(market)

    weights = np.array([c.weight for c in market.mixture.components])
    comp = rng.choice(weights.size, size=n_firms, p=weights / weights.sum())
    adopt_year = rng.integers(config.policy_year, config.end_year + 1, n_firms)
    u = rng.random(n_firms)

    adopts = np.zeros(n_firms, dtype=bool)
    for j, c in enumerate(market.mixture.components):
        after = market.firm_params(c.tech, result.after.delta_star)
        lam_after = ofdi_cutoff(after)
        if lam_after is None:
            continue
        lam_before = ofdi_cutoff(market.firm_params(c.tech, result.before.delta_star))
        dist = truncated(market.pareto, entry_cutoff(after))
        lam = pareto_quantile(dist, u)  # one uniform per firm whatever its component
        upper = lam_before if lam_before is not None else math.inf
        hit = (comp == j) & (lam > lam_after) & (lam <= upper)
        adopts |= hit

    adopts &= treated
    adoption = (years[None, :] >= adopt_year[:, None]) & adopts[:, None]
    if result.regime is Regime.REGIME1:
        log.warning("structural_no_adoption", regime=result.regime.value,
                    delta_after=result.after.delta_star)
    return adoption.astype(np.int64), _survival_share(market, result), result


# ── Entry point ──────────────────────────────────────────

def simulate_panel(config: Optional[PanelConfig] = None) -> PanelData:
    """Simulate one panel; deterministic given ``config.seed``."""
    config = config or PanelConfig()
    rng = np.random.default_rng(config.seed)
    years = config.years
    n_years = years.size
    n_firms = config.n_treated + config.n_control
    treated = np.arange(n_firms) < config.n_treated
    cal = config.covariates

    lead, trail = _observed_spans(rng, n_firms, n_years, config.attrition_rate)

    size, size_mean = _ar1_covariate(rng, n_firms, n_years, cal.size.mean, cal.size.sd,
                                     cal.size_persistence, cal.size_between_share)
    roa, _ = _ar1_covariate(rng, n_firms, n_years, cal.roa.mean, cal.roa.sd,
                            cal.roa_persistence, cal.roa_between_share)
    shape, scale = _age_start_gamma(cal, n_years)
    age0 = 1 + np.rint(rng.gamma(shape, scale, n_firms)).astype(np.int64)
    age = age0[:, None] + np.arange(n_years)[None, :]

    rates = config.missing_rates
    miss_size = rng.random((n_firms, n_years)) < rates.size
    miss_roa = rng.random((n_firms, n_years)) < rates.roa
    miss_age = rng.random((n_firms, n_years)) < rates.age

    z = (size_mean - size_mean.mean()) / size_mean.std() if n_firms > 1 and size_mean.std() > 0 else np.zeros(n_firms)
    multiplier = np.exp(config.confounding_strength * z)
    post = years >= config.policy_year
    elapsed = np.arange(1, n_years + 1)
    s_post = np.arange(1, config.n_post + 1)
    survive_bg = (1.0 - config.background_hazard) ** elapsed[post]

    background = _background_adoption(rng, n_firms, n_years, config.background_hazard, multiplier)
    meta: dict = {}
    if config.dgp_mode is DgpMode.REDUCED_FORM:
        hazard = (config.per_year_hazard if config.per_year_hazard is not None
                  else calibrate_hazard(config.true_effect, config.n_post))
        firm_hazard = np.minimum(1.0, hazard * multiplier)
        events = (rng.random((n_firms, n_years)) < firm_hazard[:, None]) & post[None, :] & treated[:, None]
        policy = _cumulative(events)
        att = survive_bg * (1.0 - (1.0 - hazard) ** s_post)
        meta.update(hazard=hazard, final_adoption_share=1.0 - (1.0 - hazard) ** config.n_post)
    else:
        policy, share, result = _structural_adoption(rng, config, treated)
        att = survive_bg * share * s_post / config.n_post
        meta.update(
            final_adoption_share=share,
            regime=result.regime,
            delta_before=result.before.delta_star,
            delta_after=result.after.delta_star,
            p_ofdi_before=result.before.p_ofdi,
            p_ofdi_after=result.after.p_ofdi,
        )
    ofdi = np.maximum(policy, background)

    idx = np.arange(n_years)[None, :]
    observed = (idx >= lead[:, None]) & (idx < (n_years - trail)[:, None])
    firm_idx, year_idx = np.nonzero(observed)
    frame = pd.DataFrame({
        "firm_id": [f"F{i + 1:04d}" for i in firm_idx],
        "group": treated[firm_idx].astype(np.int64),
        "year": years[year_idx],
        "ofdi": ofdi[firm_idx, year_idx],
        "size": np.where(miss_size[firm_idx, year_idx], np.nan, size[firm_idx, year_idx]),
        "roa": np.where(miss_roa[firm_idx, year_idx], np.nan, roa[firm_idx, year_idx]),
        "age": pd.array(age[firm_idx, year_idx], dtype="Int64"),
    }, columns=PANEL_COLUMNS)
    frame.loc[miss_age[firm_idx, year_idx], "age"] = pd.NA

    adopters = frame.loc[frame["ofdi"] == 1, "firm_id"].nunique()
    metadata = PanelMetadata(
        config=config,
        true_att_path={int(y): float(a) for y, a in zip(years[post], att)},
        expected_beta2=float(np.mean(att)),
        n_treated_realized=int(frame.loc[frame["group"] == 1, "firm_id"].nunique()),
        n_control_realized=int(frame.loc[frame["group"] == 0, "firm_id"].nunique()),
        n_adopters=int(adopters),
        **meta,
    )
    log.info("panel_simulated", mode=config.dgp_mode.value, rows=len(frame),
             adopters=metadata.n_adopters, expected_beta2=metadata.expected_beta2)
    return PanelData.from_frame(frame, metadata=metadata)


# ── Descriptives ─────────────────────────────────────────

def summary_statistics(panel: PanelData) -> pd.DataFrame:
    """Obs, mean, sd, min, max for the outcome and covariates."""
    df = panel.to_frame()
    out = []
    for col in ("ofdi", "size", "age", "roa"):
        values = df[col].astype("float64").dropna()
        out.append({
            "variable": col,
            "obs": int(values.size),
            "mean": float(values.mean()) if values.size else math.nan,
            "sd": float(values.std(ddof=1)) if values.size > 1 else math.nan,
            "min": float(values.min()) if values.size else math.nan,
            "max": float(values.max()) if values.size else math.nan,
        })
    return pd.DataFrame(out).set_index("variable")


def covariate_distribution(panel: PanelData) -> pd.DataFrame:
    """Median and interquartile range of each covariate, control vs treated."""
    df = panel.to_frame()
    out = []
    for col in ("size", "roa", "age"):
        for group, label in ((0, "control"), (1, "treated")):
            values = df.loc[df["group"] == group, col].astype("float64").dropna()
            q25, median, q75 = (values.quantile([0.25, 0.5, 0.75]).to_list() if values.size
                                else [math.nan] * 3)
            out.append({
                "variable": col, "group": label, "obs": int(values.size),
                "median": median, "q25": q25, "q75": q75, "iqr": q75 - q25,
            })
    return pd.DataFrame(out, columns=["variable", "group", "obs", "median", "q25", "q75", "iqr"])


def adoption_counts(panel: PanelData) -> pd.DataFrame:
    """New vertical-OFDI adoptions per year, one column per group."""
    df = panel.to_frame().sort_values(["firm_id", "year"])
    years = np.arange(df["year"].min(), df["year"].max() + 1) if not df.empty else np.array([], dtype=int)
    first = df[df["ofdi"] == 1].groupby("firm_id", sort=False).first()
    if first.empty:
        return pd.DataFrame(0, index=pd.Index(years, name="year"), columns=["control", "treated"])
    counts = (
        first.groupby(["year", "group"]).size().unstack("group", fill_value=0)
        .reindex(index=years, columns=[0, 1], fill_value=0)
    )
    counts.index.name = "year"
    counts.columns = ["control", "treated"]
    return counts.astype(int)
