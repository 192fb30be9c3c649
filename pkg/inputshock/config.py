"""Central configuration using Pydantic Settings."""

from __future__ import annotations

import logging

from pydantic import field_validator, model_validator
from pydantic_settings import BaseSettings

_config_log = logging.getLogger(__name__)

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class Settings(BaseSettings):
    """Library-wide defaults loaded from env / .env file.

    Experiment parameters (model, market, panel, estimation) belong in the
    per-run JSON config, not here.
    """

    model_config = {"env_file": ".env", "env_prefix": "INPUTSHOCK_"}

    # ── Logging ──────────────────────────────────────────
    log_level: str = "INFO"
    log_json: bool = False

    # ── Reproducibility ──────────────────────────────────
    random_seed: int = 42

    # ── Numerics ─────────────────────────────────────────
    bisect_tol: float = 1e-12
    bisect_maxiter: int = 200
    rank_tol: float = 1e-10
    bm_df_max_clusters: int = 2000  # above this, clustered t tests use G-1 df

    # ── Equilibrium bracket ──────────────────────────────
    bracket_lo: float = 1e-8
    bracket_hi_multiple: float = 10.0  # initial upper end = δ̃ · this
    bracket_growth: float = 10.0
    bracket_max_expansions: int = 8

    # ── figure4 command grid ─────────────────────────────
    figure4_delta_min: float = 0.0
    figure4_delta_max: float = 6.0
    figure4_points: int = 601
    figure4_mc_draws: int = 10_000  # simulated entrants per grid point; 0 skips the check

    # ── Panel simulation ─────────────────────────────────
    size_persistence: float = 0.8
    roa_persistence: float = 0.6
    size_between_share: float = 0.7
    roa_between_share: float = 0.5
    max_censor_fraction: float = 1 / 3

    # ── Validation ───────────────────────────────────────
    validation_replications: int = 500
    confidence_level: float = 0.95

    @field_validator("log_level", mode="before")
    @classmethod
    def _normalize_log_level(cls, v: str) -> str:
        """Strip whitespace and upper-case the level name."""
        if isinstance(v, str):
            v = v.strip().upper()
            if v not in _LOG_LEVELS:
                raise ValueError(f"Unknown log level {v!r}; expected one of {sorted(_LOG_LEVELS)}")
        return v

    @model_validator(mode="after")
    def _validate_numerics(self) -> "Settings":
        """Reject tolerances and grids that cannot work."""
        if self.bisect_tol <= 0 or self.rank_tol <= 0:
            raise ValueError("bisect_tol and rank_tol must be positive")
        if self.bracket_growth <= 1:
            raise ValueError("bracket_growth must exceed 1")
        if self.figure4_points < 2 or self.figure4_delta_max <= self.figure4_delta_min:
            raise ValueError("figure4 grid needs >= 2 points over a nonempty interval")
        if not 0 < self.confidence_level < 1:
            raise ValueError("confidence_level must lie in (0, 1)")
        for name in ("size_persistence", "roa_persistence"):
            if not -1 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (-1, 1) for a stationary AR(1)")
        if self.max_censor_fraction >= 0.5:
            _config_log.warning(
                "max_censor_fraction %.2f can censor most of a firm's span",
                self.max_censor_fraction,
            )
        return self


settings = Settings()
