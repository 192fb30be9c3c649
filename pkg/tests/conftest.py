"""Shared test fixtures for InputShock."""

from __future__ import annotations

import pandas as pd
import pytest

from inputshock.data.generator import simulate_panel
from inputshock.data.schemas import PanelConfig, PanelData
from inputshock.market.schemas import MarketConfig, demo_market
from inputshock.model.schemas import ModelParams


@pytest.fixture
def figure4_params() -> ModelParams:
    """(α, ρ, δ̃, f, f_I) = (2, 0.5, 2, 1, 1), η = 1, δ = 3.5."""
    return ModelParams.figure4(eta=1.0, delta=3.5)


@pytest.fixture
def reference_market() -> MarketConfig:
    return demo_market("regime2")


@pytest.fixture
def toy_panel() -> PanelData:
    """Two firms, two years: control stays at 0, treated switches on in 2017."""
    frame = pd.DataFrame({
        "firm_id": ["A", "A", "B", "B"],
        "group": [0, 0, 1, 1],
        "year": [2016, 2017, 2016, 2017],
        "ofdi": [0, 0, 0, 1],
        "size": [None] * 4,
        "roa": [None] * 4,
        "age": [None] * 4,
    })
    return PanelData.from_frame(frame)


@pytest.fixture
def balanced_config() -> PanelConfig:
    """Full-size 42-firm panel with no attrition and no missing covariates."""
    return PanelConfig(
        attrition_rate=0.0,
        missing_rates={"size": 0.0, "roa": 0.0, "age": 0.0},
        seed=2024,
    )


@pytest.fixture
def balanced_panel(balanced_config) -> PanelData:
    return simulate_panel(balanced_config)


@pytest.fixture(scope="session")
def default_panel() -> PanelData:
    return simulate_panel(PanelConfig(seed=7))
