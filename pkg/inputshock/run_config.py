"""Per-run JSON configuration: one block per stage of the pipeline."""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from .config import settings
from .data.schemas import PanelConfig
from .estimation.schemas import DidSpec
from .market.schemas import MarketConfig, demo_market
from .model.schemas import ModelParams
from .validation.montecarlo import ValidationConfig


class Figure4Grid(BaseModel):
    """δ grid and η values for the OFDI probability curves."""

    delta_min: float = Field(default_factory=lambda: settings.figure4_delta_min, ge=0)
    delta_max: float = Field(default_factory=lambda: settings.figure4_delta_max, gt=0)
    points: int = Field(default_factory=lambda: settings.figure4_points, ge=2)
    etas: List[float] = Field(default_factory=lambda: [1.0, 2.0, 10.0], min_length=1)
    mc_draws: int = Field(default_factory=lambda: settings.figure4_mc_draws, ge=0)

    @model_validator(mode="after")
    def _ordered(self) -> "Figure4Grid":
        if self.delta_max <= self.delta_min:
            raise ValueError("delta_max must exceed delta_min")
        return self

    def deltas(self) -> np.ndarray:
        return np.linspace(self.delta_min, self.delta_max, self.points)


class RunConfig(BaseModel):
    model: ModelParams = Field(default_factory=ModelParams.figure4)
    figure4: Figure4Grid = Field(default_factory=Figure4Grid)
    market: MarketConfig = Field(default_factory=lambda: demo_market("regime2"))
    panel: PanelConfig = Field(default_factory=PanelConfig)
    did: DidSpec = Field(default_factory=DidSpec)
    validate_: ValidationConfig = Field(default_factory=ValidationConfig, alias="validate")
    seed: Optional[int] = None  # overrides panel.seed and validate.seed
    replications: Optional[int] = Field(default=None, ge=1)  # overrides validate.replications
    panel_csv: Optional[str] = None  # input for estimate / event-study

    model_config = {"populate_by_name": True}

    @classmethod
    def load(cls, path: str | Path | None) -> "RunConfig":
        if path is None:
            return cls()
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))

    def with_overrides(self, seed: Optional[int] = None, replications: Optional[int] = None) -> "RunConfig":
        """Fold top-level and command-line overrides into the blocks."""
        seed = seed if seed is not None else self.seed
        replications = replications if replications is not None else self.replications
        panel, validate = self.panel, self.validate_
        if seed is not None:
            panel = panel.model_copy(update={"seed": seed})
            validate = validate.model_copy(update={"seed": seed})
        if replications is not None:
            validate = validate.model_copy(update={"replications": replications})
        return self.model_copy(update={"panel": panel, "validate_": validate})
