"""Synthetic firm-year panels and their CSV representation."""

from .generator import (
    adoption_counts,
    average_adoption_share,
    calibrate_hazard,
    covariate_distribution,
    simulate_panel,
    summary_statistics,
)
from .panel_io import export_csv, import_csv
from .schemas import (
    PANEL_COLUMNS,
    CovariateCalibration,
    CovariateTarget,
    DgpMode,
    MissingRates,
    PanelConfig,
    PanelData,
    PanelMetadata,
    PanelRow,
    check_panel_frame,
)

__all__ = [
    "PANEL_COLUMNS",
    "DgpMode",
    "CovariateTarget",
    "CovariateCalibration",
    "MissingRates",
    "PanelConfig",
    "PanelRow",
    "PanelMetadata",
    "PanelData",
    "check_panel_frame",
    "simulate_panel",
    "calibrate_hazard",
    "average_adoption_share",
    "summary_statistics",
    "adoption_counts",
    "covariate_distribution",
    "export_csv",
    "import_csv",
]
