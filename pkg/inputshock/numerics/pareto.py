"""Pareto productivity distribution: partial moments and inverse-transform draws."""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DivergentIntegralError, DomainError


class ParetoDist(BaseModel):
    """Pareto(λ_m, α) with density α λ_mᵅ λ^(−α−1) on [λ_m, ∞)."""

    model_config = ConfigDict(frozen=True)

    scale: float = Field(default=1.0, gt=0)  # λ_m
    shape: float = Field(default=2.0, gt=0)  # α

    def cdf(self, x: float | np.ndarray) -> float | np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.where(x < self.scale, 0.0, 1.0 - (self.scale / np.maximum(x, self.scale)) ** self.shape)
        return out if out.ndim else float(out)

    def survival(self, x: float) -> float:
        """P(λ > x)."""
        if x <= self.scale:
            return 1.0
        return (self.scale / x) ** self.shape


def pareto_partial_moment(dist: ParetoDist, k: float, a: float, b: float = math.inf) -> float:
    """∫ₐᵇ λᵏ dΠ(λ) under the Pareto density, in closed form.

    Raises:
        DomainError: ``a < λ_m`` or ``b <= a``.
        DivergentIntegralError: ``b`` infinite with ``k >= α``.
    """
    lam_m, alpha = dist.scale, dist.shape
    if a < lam_m:
        raise DomainError(f"lower limit {a} is below the Pareto scale {lam_m}")
    if not b > a:
        raise DomainError(f"upper limit {b} must exceed lower limit {a}")
    if math.isinf(b) and k >= alpha:
        raise DivergentIntegralError(
            f"moment of order {k} diverges for shape {alpha} on an unbounded range"
        )

    coef = alpha * lam_m**alpha
    if k == alpha:
        return coef * math.log(b / a)
    upper = 0.0 if math.isinf(b) else b ** (k - alpha)
    return coef * (a ** (k - alpha) - upper) / (alpha - k)


def pareto_quantile(dist: ParetoDist, p: float | np.ndarray) -> float | np.ndarray:
    """Inverse CDF λ_m · (1−p)^(−1/α) for p in [0, 1)."""
    return dist.scale * (1.0 - np.asarray(p, dtype=float)) ** (-1.0 / dist.shape)


def pareto_sample(dist: ParetoDist, rng: np.random.Generator) -> float:
    """One inverse-transform draw λ_m · u^(−1/α), u ~ U(0, 1]."""
    return float(pareto_quantile(dist, rng.random()))


def pareto_draws(dist: ParetoDist, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized counterpart of :func:`pareto_sample` (same stream layout)."""
    return pareto_quantile(dist, rng.random(size))


def truncated(dist: ParetoDist, lower: float) -> ParetoDist:
    """Distribution of λ conditional on λ >= lower (again Pareto)."""
    return dist.model_copy(update={"scale": max(dist.scale, lower)})
