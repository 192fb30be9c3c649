"""Numerical primitives shared by the model, market and estimation layers."""

from .pareto import ParetoDist, pareto_draws, pareto_partial_moment, pareto_quantile, pareto_sample, truncated
from .regression import (
    CovMode,
    RegressionFit,
    chi2_sf,
    clustered_wald_pvalue,
    fe_ols,
    newey_west_bandwidth,
    wald_joint,
    wald_reduced_rank,
)
from .rng import derive_seeds
from .roots import bisect

__all__ = [
    "ParetoDist",
    "pareto_partial_moment",
    "pareto_quantile",
    "pareto_sample",
    "pareto_draws",
    "truncated",
    "bisect",
    "CovMode",
    "RegressionFit",
    "fe_ols",
    "wald_joint",
    "wald_reduced_rank",
    "chi2_sf",
    "clustered_wald_pvalue",
    "newey_west_bandwidth",
    "derive_seeds",
]
