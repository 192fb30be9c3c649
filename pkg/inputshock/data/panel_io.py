"""CSV import/export for firm-year panels.

Schema (UTF-8, header, comma-separated):
``firm_id,group,year,ofdi,size,roa,age``; missing covariates are empty fields.
"""

from __future__ import annotations

import math
from pathlib import Path

import pandas as pd

from ..errors import PanelSchemaError
from ..utils.logging_config import get_logger
from .schemas import PANEL_COLUMNS, PanelData

log = get_logger(__name__)

_REQUIRED = ("firm_id", "group", "year", "ofdi")


def export_csv(panel: PanelData, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    panel.to_frame().to_csv(path, index=False, na_rep="", lineterminator="\n")
    log.info("panel_exported", path=str(path), rows=len(panel))
    return path


def _integer_column(df: pd.DataFrame, col: str, allowed: tuple[int, ...] | None = None) -> pd.Series:
    values = pd.to_numeric(df[col], errors="coerce")
    bad = values.isna() | (values != values.round())
    if allowed is not None:
        bad |= ~values.isin(allowed)
    if bad.any():
        row = int(bad.to_numpy().argmax()) + 1
        raise PanelSchemaError(f"row {row}: invalid {col} value {df[col].iloc[row - 1]!r}")
    return values.astype("int64")


def _parse_float(value: object) -> float:
    """``float()`` round-trips ``repr``; NaN marks both empty and unparsable fields."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return math.nan
    try:
        return float(value)  # type: ignore[arg-type]
    except ValueError:
        return math.nan


def _float_column(df: pd.DataFrame, col: str) -> pd.Series:
    values = df[col].map(_parse_float).astype("float64")
    bad = values.isna() & df[col].notna()
    if bad.any():
        row = int(bad.to_numpy().argmax()) + 1
        raise PanelSchemaError(f"row {row}: {col} is not a number: {df[col].iloc[row - 1]!r}")
    return values.astype("float64")


def import_csv(path: str | Path) -> PanelData:
    """Read and validate a panel; errors name the 1-based data row."""
    path = Path(path)
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[""])
    except pd.errors.EmptyDataError as exc:
        raise PanelSchemaError(f"{path}: file is empty (expected header {','.join(PANEL_COLUMNS)})") from exc

    if list(raw.columns) != PANEL_COLUMNS:
        raise PanelSchemaError(f"{path}: header {list(raw.columns)} != {PANEL_COLUMNS}")

    for col in _REQUIRED:
        missing = raw[col].isna()
        if missing.any():
            raise PanelSchemaError(f"row {int(missing.to_numpy().argmax()) + 1}: {col} is empty")

    df = pd.DataFrame({
        "firm_id": raw["firm_id"].astype(str),
        "group": _integer_column(raw, "group", (0, 1)),
        "year": _integer_column(raw, "year"),
        "ofdi": _integer_column(raw, "ofdi", (0, 1)),
        "size": _float_column(raw, "size"),
        "roa": _float_column(raw, "roa"),
        "age": _float_column(raw, "age"),
    })
    age_bad = df["age"].notna() & ((df["age"] != df["age"].round()) | (df["age"] < 0))
    if age_bad.any():
        row = int(age_bad.to_numpy().argmax()) + 1
        raise PanelSchemaError(f"row {row}: age must be a nonnegative integer")
    df["age"] = df["age"].astype("Int64")

    panel = PanelData.from_frame(df)
    log.info("panel_imported", path=str(path), rows=len(panel), firms=len(panel.firm_ids))
    return panel
