"""Tests for bracketed root finding and seed derivation."""

from __future__ import annotations

import math

import pytest

from inputshock.errors import NonFiniteEvaluationError, NoSignChangeError
from inputshock.numerics import bisect, derive_seeds


class TestBisect:
    def test_square_root_of_two(self):
        assert bisect(lambda x: x * x - 2, 0.0, 2.0, tol=1e-12) == pytest.approx(math.sqrt(2), abs=1e-11)

    def test_odd_function_root_at_zero(self):
        assert abs(bisect(lambda x: x, -1.0, 1.0)) <= 1e-11

    def test_reversed_bracket(self):
        assert bisect(lambda x: x - 0.25, 1.0, 0.0) == pytest.approx(0.25, abs=1e-11)

    def test_root_on_endpoint(self):
        assert bisect(lambda x: x - 1.0, 1.0, 3.0) == 1.0

    def test_no_sign_change(self):
        with pytest.raises(NoSignChangeError):
            bisect(lambda x: x * x + 1, -1.0, 1.0)

    def test_non_finite_evaluation(self):
        with pytest.raises(NonFiniteEvaluationError):
            bisect(lambda x: math.nan, 0.0, 1.0)


class TestSeeds:
    def test_deterministic(self):
        assert derive_seeds(42, 5) == derive_seeds(42, 5)

    def test_prefix_stable_and_distinct(self):
        seeds = derive_seeds(42, 10)
        assert derive_seeds(42, 3) == seeds[:3]
        assert len(set(seeds)) == 10

    def test_root_changes_children(self):
        assert derive_seeds(1, 3) != derive_seeds(2, 3)
