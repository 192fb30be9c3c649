"""Group-year relative frequencies and the aggregate DID regression."""

from __future__ import annotations

from typing import Optional

import pandas as pd

from ..data.schemas import PanelData
from ..errors import InsufficientObservationsError
from ..numerics.regression import CovMode, fe_ols
from ..utils.logging_config import get_logger
from .design import check_post_year, control_columns, listwise, panel_frame, treatment_columns
from .did import result_from_fit
from .schemas import AggregateRow, DidResult, DidSpec

log = get_logger(__name__)


def aggregate_probability(panel: PanelData) -> pd.DataFrame:
    """Share of firms with OFDI per (group, year); empty cells keep n_firms = 0."""
    df = panel_frame(panel)
    if df.empty:
        return pd.DataFrame(columns=["group", "year", "p_hat", "n_firms"])
    grid = pd.MultiIndex.from_product(
        [[0, 1], range(int(df["year"].min()), int(df["year"].max()) + 1)], names=["group", "year"]
    )
    cells = df.groupby(["group", "year"])["ofdi"].agg(p_hat="mean", n_firms="size").reindex(grid)
    cells["n_firms"] = cells["n_firms"].fillna(0).astype(int)
    return cells.reset_index()


def aggregate_rows(panel: PanelData) -> list[AggregateRow]:
    return [
        AggregateRow(group=int(r.group), year=int(r.year),
                     p_hat=None if pd.isna(r.p_hat) else float(r.p_hat), n_firms=int(r.n_firms))
        for r in aggregate_probability(panel).itertuples(index=False)
    ]


def estimate_aggregate(panel: PanelData, spec: Optional[DidSpec] = None) -> DidResult:
    """Regress p̂ on dP, dP:dT and within-cell control averages with group effects.

    Bartlett HAC within group over years unless ``spec.cov_mode`` says otherwise.
    """
    spec = spec or DidSpec()
    df = panel_frame(panel)
    check_post_year(df, spec)
    if spec.pretrend_controls is not None:
        log.warning("pretrend_controls_ignored", level="aggregate")

    cells = aggregate_probability(panel)
    cells = cells[cells["n_firms"] > 0].reset_index(drop=True)
    if cells["group"].nunique() < 2 or cells["year"].nunique() < 2:
        raise InsufficientObservationsError("aggregate model needs two groups and two years with data")

    controls = control_columns(df, spec.control_level)
    n_dropped = 0
    if controls.shape[1]:
        keep = listwise(controls)
        n_dropped = int((~keep).sum())
        means = controls[keep].groupby([df.loc[keep, "group"], df.loc[keep, "year"]]).mean()
        cells = cells.join(means, on=["group", "year"], how="inner").reset_index(drop=True)

    X = pd.concat([treatment_columns(cells, spec), cells[list(controls.columns)]], axis=1).astype("float64")
    fit = fe_ols(cells["p_hat"].astype(float), X, cells["group"].to_numpy(),
                 cov_mode=spec.cov_mode or CovMode.hac(), time_ids=cells["year"].to_numpy())
    result = result_from_fit(
        fit,
        level="aggregate",
        control_level=spec.control_level,
        n_firms=int(df["firm_id"].nunique()),
        n_dropped=n_dropped,
        columns=list(X.columns),
    )
    log.info("aggregate_estimated", beta2=result.beta2, se=result.beta2_se, cells=result.n_obs)
    return result
