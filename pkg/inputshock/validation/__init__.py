"""Monte Carlo checks of the simulate → estimate pipeline."""

from .montecarlo import ValidationConfig, ValidationSummary, run_validation

__all__ = ["ValidationConfig", "ValidationSummary", "run_validation"]
