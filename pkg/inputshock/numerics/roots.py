"""Bracketed root finding."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import optimize

from ..config import settings
from ..errors import DomainError, NonFiniteEvaluationError, NoSignChangeError


def _checked(f: Callable[[float], float]) -> Callable[[float], float]:
    def wrapped(x: float) -> float:
        value = float(f(x))
        if not math.isfinite(value):
            raise NonFiniteEvaluationError(f"f({x!r}) = {value}")
        return value
    return wrapped


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float | None = None,
    maxiter: int | None = None,
) -> float:
    """Root of a continuous ``f`` on ``[lo, hi]`` to absolute tolerance ``tol``.

    Raises:
        NoSignChangeError: f(lo) and f(hi) share a sign.
        NonFiniteEvaluationError: f returned NaN/inf anywhere.
    """
    tol = tol if tol is not None else settings.bisect_tol
    maxiter = maxiter if maxiter is not None else settings.bisect_maxiter
    if tol <= 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if lo > hi:
        lo, hi = hi, lo

    g = _checked(f)
    f_lo, f_hi = g(lo), g(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise NoSignChangeError(f"f({lo})={f_lo:.6g} and f({hi})={f_hi:.6g} have the same sign")

    return optimize.bisect(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=maxiter)
