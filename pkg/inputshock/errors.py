"""Exception hierarchy.

Everything derives from ``ValueError`` so callers that only care about bad
inputs can keep catching that.
"""

from __future__ import annotations


class InputShockError(ValueError):
    """Base class for all library errors."""


# ── numerics ─────────────────────────────────────────────

class DomainError(InputShockError):
    """Argument outside the mathematical domain of the operation."""


class DivergentIntegralError(InputShockError):
    """Pareto moment over an unbounded range with k >= α."""


class IntegrabilityError(InputShockError):
    """Pareto shape too small for finite aggregate demand (α <= ρ/(1-ρ))."""


class NoSignChangeError(InputShockError):
    """Root bracket endpoints do not straddle zero."""


class NonFiniteEvaluationError(InputShockError):
    """Function returned NaN or ±inf during root finding."""


class BracketError(InputShockError):
    """Equilibrium bracket could not be expanded to a sign change."""


class DimensionMismatchError(InputShockError):
    """Outcome, design and unit labels are not conformable."""


class InsufficientObservationsError(InputShockError):
    """Too few observations or units for the requested fit."""


class AllColumnsDroppedError(InputShockError):
    """Every regressor vanished after within-demeaning / rank detection."""


class UnknownColumnError(InputShockError, KeyError):
    """Requested coefficient is not among the retained columns."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class SingularCovarianceError(InputShockError):
    """Covariance sub-block cannot be inverted."""


# ── simulation / data ────────────────────────────────────

class CalibrationError(InputShockError):
    """Simulation targets cannot be met under the configured horizon."""


class PanelSchemaError(InputShockError):
    """CSV file does not match the panel schema."""


class AbsorbingViolationError(PanelSchemaError):
    """Cumulative OFDI indicator drops from 1 back to 0 within a firm."""


class DuplicateKeyError(PanelSchemaError):
    """Same (firm_id, year) appears more than once."""
