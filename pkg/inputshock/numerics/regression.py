"""Fixed-effects least squares with robust covariance and joint Wald tests.

The within transformation removes unit effects; collinear regressors are
detected with a column-pivoted QR and reported as dropped ("partialled out")
instead of failing the fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
import pandas as pd
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field
from scipy import special, stats

from ..config import settings
from ..errors import (
    AllColumnsDroppedError,
    DimensionMismatchError,
    InsufficientObservationsError,
    SingularCovarianceError,
    UnknownColumnError,
)
from ..utils.logging_config import get_logger

log = get_logger(__name__)


class CovMode(BaseModel):
    """Robust covariance choice: cluster-by-unit or Bartlett-kernel HAC.

    Clustered fits default to the CR2 bias-reduced sandwich with
    Bell-McCaffrey degrees of freedom per coefficient; ``cr1`` is the
    G/(G-1)-scaled sandwich with G-1 degrees of freedom.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["cluster", "hac_bartlett"] = "cluster"
    bandwidth: int | None = Field(default=None, ge=0)  # HAC only; None = rule of thumb
    small_sample: Literal["cr2", "cr1"] = "cr2"  # cluster only

    @classmethod
    def cluster(cls, small_sample: Literal["cr2", "cr1"] = "cr2") -> "CovMode":
        return cls(kind="cluster", small_sample=small_sample)

    @classmethod
    def hac(cls, bandwidth: int | None = None) -> "CovMode":
        return cls(kind="hac_bartlett", bandwidth=bandwidth)


@dataclass
class RegressionFit:
    """Within-estimator output over the retained columns."""

    coefficients: pd.Series
    covariance: pd.DataFrame
    r_squared: float
    dropped_columns: list[str]
    n_obs: int
    n_units: int
    residuals: np.ndarray = field(repr=False)
    df_resid: int = 0
    cov_kind: str = "cluster"
    bandwidth: int | None = None
    coef_df: pd.Series | None = field(default=None, repr=False)  # Bell-McCaffrey, CR2 only

    @property
    def std_errors(self) -> pd.Series:
        return pd.Series(np.sqrt(np.clip(np.diag(self.covariance.to_numpy()), 0.0, None)),
                         index=self.coefficients.index)

    @property
    def residual_variance(self) -> float:
        return float(np.mean(self.residuals**2)) if self.residuals.size else 0.0

    def df_for(self, column: str) -> float:
        """Degrees of freedom for a t test on ``column``."""
        if self.coef_df is not None and column in self.coef_df.index and np.isfinite(self.coef_df[column]):
            return float(self.coef_df[column])
        return float(self.df_resid)

    @property
    def retained_columns(self) -> list[str]:
        return list(self.coefficients.index)


def newey_west_bandwidth(n_periods: int) -> int:
    """Rule-of-thumb Bartlett bandwidth ⌊4(T/100)^(2/9)⌋."""
    return int(math.floor(4 * (n_periods / 100) ** (2 / 9)))


def within_demean(values: pd.DataFrame | pd.Series, unit_ids: np.ndarray) -> np.ndarray:
    """Subtract unit means (the fixed-effects within transformation)."""
    frame = pd.DataFrame(values).reset_index(drop=True).astype(float)
    means = frame.groupby(unit_ids, sort=False).transform("mean")
    return (frame - means).to_numpy(dtype=float)


def _pivoted_rank(X: np.ndarray, rank_tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Split column indices into (retained, dropped) via pivoted QR."""
    n_cols = X.shape[1]
    if not np.any(X):
        return np.array([], dtype=int), np.arange(n_cols)
    _, R, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rank = int(np.sum(diag > rank_tol * diag[0]))
    return np.sort(piv[:rank]), np.sort(piv[rank:])


def _cluster_meat(scores: np.ndarray, unit_ids: np.ndarray) -> np.ndarray:
    summed = pd.DataFrame(scores).groupby(unit_ids, sort=False).sum().to_numpy()
    return summed.T @ summed


def _cluster_blocks(unit_ids: np.ndarray) -> list[np.ndarray]:
    """Row indices per cluster, clusters in order of first appearance."""
    codes, _ = pd.factorize(unit_ids)
    order = np.argsort(codes, kind="stable")
    return np.split(order, np.flatnonzero(np.diff(codes[order])) + 1)


def _cr2_meat(
    X: np.ndarray, resid: np.ndarray, blocks: list[np.ndarray], bread: np.ndarray, rank_tol: float,
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Σ_g X_g'A_g e_g e_g'A_g X_g with A_g = (I − H_gg)^(−1/2).

    H_gg is the within-cluster block of the hat matrix of the demeaned design;
    a leverage-one direction gets a zero weight (pseudo-inverse root).
    Also returns A_g X_g per cluster for the degrees-of-freedom step.
    """
    k = X.shape[1]
    meat = np.zeros((k, k))
    adjusted = []
    for idx in blocks:
        Xg = X[idx]
        eig, vec = scipy.linalg.eigh(np.eye(idx.size) - Xg @ bread @ Xg.T)
        root = np.where(eig > rank_tol, 1.0 / np.sqrt(np.clip(eig, rank_tol, None)), 0.0)
        AX = (vec * root) @ (vec.T @ Xg)
        u = AX.T @ resid[idx]
        meat += np.outer(u, u)
        adjusted.append(AX)
    return meat, adjusted


def _bell_mccaffrey_df(
    X: np.ndarray, blocks: list[np.ndarray], adjusted: list[np.ndarray], bread: np.ndarray,
) -> np.ndarray:
    """Satterthwaite df of the CR2 variance of each coefficient under iid errors.

    With v_g = A_g X_g B c the variance estimate is ε'PP'ε, and
    P'P = diag(v_g'v_g) − Q'BQ with Q_g = X_g'v_g; df = tr(P'P)² / ‖P'P‖²_F.
    """
    k = bread.shape[0]
    n_clusters = len(blocks)
    own = np.empty((n_clusters, k))
    cross = np.empty((n_clusters, k, k))
    for g, (idx, AX) in enumerate(zip(blocks, adjusted)):
        V = AX @ bread
        own[g] = np.einsum("ij,ij->j", V, V)
        cross[g] = X[idx].T @ V
    out = np.full(k, np.nan)
    for j in range(k):
        Q = cross[:, :, j]
        PP = np.diag(own[:, j]) - Q @ bread @ Q.T
        fro = float(np.sum(PP * PP))
        if fro > 0:
            out[j] = float(np.trace(PP)) ** 2 / fro
    return out


def _bartlett_meat(
    scores: np.ndarray, unit_ids: np.ndarray, time_ids: np.ndarray, bandwidth: int,
) -> np.ndarray:
    """Σ_units [Γ₀ + Σ_l w_l (Γ_l + Γ_l')] with w_l = 1 − l/(L+1), in time order."""
    k = scores.shape[1]
    meat = np.zeros((k, k))
    codes, _ = pd.factorize(unit_ids)
    order = np.lexsort((time_ids, codes))
    s_sorted, u_sorted = scores[order], codes[order]
    boundaries = np.flatnonzero(u_sorted[1:] != u_sorted[:-1]) + 1
    for block in np.split(s_sorted, boundaries):
        meat += block.T @ block
        for lag in range(1, min(bandwidth, block.shape[0] - 1) + 1):
            weight = 1.0 - lag / (bandwidth + 1)
            gamma = block[lag:].T @ block[:-lag]
            meat += weight * (gamma + gamma.T)
    return meat


def fe_ols(
    y: Sequence[float] | np.ndarray | pd.Series,
    X: pd.DataFrame,
    unit_ids: Sequence | np.ndarray | pd.Series,
    cov_mode: CovMode | None = None,
    time_ids: Sequence | np.ndarray | pd.Series | None = None,
    rank_tol: float | None = None,
) -> RegressionFit:
    """Within-unit least squares with robust covariance.

    Args:
        y: Outcome, one entry per row of ``X``.
        X: Design matrix with named columns (no constant: unit effects absorb it).
        unit_ids: Unit label per row; defines the fixed effects and the clusters.
        cov_mode: Cluster-by-unit (default) or Bartlett HAC within unit.
        time_ids: Period per row; required for HAC ordering.
        rank_tol: Relative tolerance on |R_ii| for dropping collinear columns.

    Raises:
        DimensionMismatchError, InsufficientObservationsError, AllColumnsDroppedError
    """
    cov_mode = cov_mode or CovMode.cluster()
    rank_tol = rank_tol if rank_tol is not None else settings.rank_tol

    y_arr = np.asarray(y, dtype=float).reshape(-1)
    units = np.asarray(unit_ids)
    n_obs = y_arr.shape[0]
    if X.shape[0] != n_obs or units.shape[0] != n_obs:
        raise DimensionMismatchError(
            f"y has {n_obs} rows, X has {X.shape[0]}, unit_ids has {units.shape[0]}"
        )
    n_units = int(pd.unique(units).size)
    if n_units < 2:
        raise InsufficientObservationsError(f"need at least 2 units, got {n_units}")
    if cov_mode.kind == "hac_bartlett" and time_ids is None:
        raise DimensionMismatchError("HAC covariance needs time_ids for ordering")

    names = [str(c) for c in X.columns]
    y_w = within_demean(pd.Series(y_arr), units).reshape(-1)
    X_w = within_demean(X, units) if names else np.empty((n_obs, 0))

    keep_idx, drop_idx = _pivoted_rank(X_w, rank_tol) if names else (np.array([], int), np.array([], int))
    dropped = [names[i] for i in drop_idx]
    if keep_idx.size == 0:
        raise AllColumnsDroppedError(f"no regressor survives demeaning: {names}")
    if dropped:
        log.info("columns_partialled_out", columns=dropped)

    kept = [names[i] for i in keep_idx]
    Xk = X_w[:, keep_idx]
    n_params = Xk.shape[1]
    if n_obs <= n_params:
        raise InsufficientObservationsError(f"{n_obs} observations for {n_params} retained columns")

    beta, *_ = scipy.linalg.lstsq(Xk, y_w)
    resid = y_w - Xk @ beta
    sst = float(y_w @ y_w)
    r_squared = float(np.clip(1.0 - (resid @ resid) / sst, 0.0, 1.0)) if sst > 0 else 0.0

    bread = scipy.linalg.pinvh(Xk.T @ Xk)
    scores = Xk * resid[:, None]
    bandwidth: int | None = None
    coef_df: pd.Series | None = None
    if cov_mode.kind == "cluster" and cov_mode.small_sample == "cr2":
        blocks = _cluster_blocks(units)
        meat, adjusted = _cr2_meat(Xk, resid, blocks, bread, rank_tol)
        scale = 1.0
        df_resid = n_units - 1
        if n_units <= settings.bm_df_max_clusters:
            bm = _bell_mccaffrey_df(Xk, blocks, adjusted, bread)
            coef_df = pd.Series(np.minimum(bm, df_resid), index=kept)
    elif cov_mode.kind == "cluster":
        meat = _cluster_meat(scores, units)
        scale = n_units / (n_units - 1) * (n_obs - 1) / (n_obs - n_params)
        df_resid = n_units - 1
    else:
        times = np.asarray(time_ids)
        if times.shape[0] != n_obs:
            raise DimensionMismatchError(f"time_ids has {times.shape[0]} rows, expected {n_obs}")
        periods = int(pd.unique(times).size)
        bandwidth = cov_mode.bandwidth if cov_mode.bandwidth is not None else newey_west_bandwidth(periods)
        meat = _bartlett_meat(scores, units, times, bandwidth)
        scale = n_obs / (n_obs - n_params)
        df_resid = n_obs - n_params - n_units

    cov = scale * bread @ meat @ bread
    cov = (cov + cov.T) / 2

    log.debug("fe_ols_fit", n_obs=n_obs, n_units=n_units, retained=len(kept), cov=cov_mode.kind)
    return RegressionFit(
        coefficients=pd.Series(beta, index=kept),
        covariance=pd.DataFrame(cov, index=kept, columns=kept),
        r_squared=r_squared,
        dropped_columns=dropped,
        n_obs=n_obs,
        n_units=n_units,
        residuals=resid,
        df_resid=max(df_resid, 1),
        cov_kind=cov_mode.kind,
        bandwidth=bandwidth,
        coef_df=coef_df,
    )


def chi2_sf(statistic: float, df: int) -> float:
    """Upper χ² tail through the regularized upper incomplete gamma Q(df/2, x/2)."""
    if statistic <= 0:
        return 1.0
    return float(special.gammaincc(df / 2.0, statistic / 2.0))


def wald_joint(fit: RegressionFit, columns: Sequence[str]) -> tuple[float, float]:
    """Joint χ² test that the named coefficients are all zero.

    Returns:
        (statistic b'V⁻¹b, p-value with len(columns) degrees of freedom)
    """
    cols = sorted(set(columns))
    if not cols:
        raise UnknownColumnError("no columns to test")
    missing = [c for c in cols if c not in fit.coefficients.index]
    if missing:
        raise UnknownColumnError(f"columns not among retained coefficients: {missing}")

    b = fit.coefficients[cols].to_numpy()
    V = fit.covariance.loc[cols, cols].to_numpy()
    eig = scipy.linalg.eigvalsh(V)
    if eig[-1] <= 0 or eig[0] <= settings.rank_tol * eig[-1]:
        raise SingularCovarianceError(f"covariance of {cols} is singular (eigenvalues {eig[0]:.3g} .. {eig[-1]:.3g})")
    try:
        cho = scipy.linalg.cho_factor(V)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SingularCovarianceError(f"covariance of {cols} is not invertible") from exc

    statistic = float(b @ scipy.linalg.cho_solve(cho, b))
    statistic = max(statistic, 0.0)
    return statistic, chi2_sf(statistic, len(cols))


def wald_reduced_rank(fit: RegressionFit, columns: Sequence[str]) -> tuple[float, float, int]:
    """b'V⁺b over the numerically nonzero eigen-directions of V.

    Returns:
        (statistic, χ² p-value, rank), the rank doubling as degrees of freedom
    """
    cols = sorted(set(columns))
    missing = [c for c in cols if c not in fit.coefficients.index]
    if not cols or missing:
        raise UnknownColumnError(f"columns not among retained coefficients: {missing or cols}")
    b = fit.coefficients[cols].to_numpy()
    eig, vec = scipy.linalg.eigh(fit.covariance.loc[cols, cols].to_numpy())
    keep = eig > settings.rank_tol * max(float(eig[-1]), 0.0)
    rank = int(keep.sum())
    if rank == 0:
        raise SingularCovarianceError(f"covariance of {cols} is zero")
    proj = vec[:, keep].T @ b
    statistic = max(float(np.sum(proj**2 / eig[keep])), 0.0)
    log.info("wald_reduced_rank", restrictions=len(cols), rank=rank)
    return statistic, chi2_sf(statistic, rank), rank


def clustered_wald_pvalue(statistic: float, q: int, n_clusters: int) -> float:
    """Small-sample p-value for a cluster-robust Wald statistic.

    Uses (G−q)/(q(G−1))·W ~ F(q, G−q); falls back to χ²(q) when G <= q.
    """
    if statistic <= 0:
        return 1.0
    if n_clusters <= q:
        return chi2_sf(statistic, q)
    scaled = (n_clusters - q) / (q * (n_clusters - 1)) * statistic
    return float(stats.f.sf(scaled, q, n_clusters - q))
