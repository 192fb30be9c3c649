"""Structured logging on stderr via structlog.

Stdout carries command output (CSV paths, summaries), so every record,
structlog or stdlib, goes to stderr.
"""

from __future__ import annotations

import logging
import sys
from typing import Any

import numpy as np
import structlog

from inputshock.config import settings

_configured_level: int | None = None


def _numpy_to_builtin(_logger: Any, _method: str, event_dict: dict[str, Any]) -> dict[str, Any]:
    """Unwrap numpy scalars and short arrays so the JSON renderer accepts them."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray) and value.size <= 16:
            event_dict[key] = value.tolist()
    return event_dict


def _stderr_logger(*_args: Any) -> structlog.PrintLogger:
    # resolved per call so redirected stderr is honoured
    return structlog.PrintLogger(sys.stderr)


def setup_logging(quiet: bool = False) -> None:
    """Route structlog and stdlib logging to stderr at the configured level.

    ``quiet`` lifts the threshold to WARNING (replication workers). Calling
    again with a different level reconfigures; same level is a no-op.
    """
    global _configured_level
    level = logging.WARNING if quiet else logging.getLevelName(settings.log_level)
    if _configured_level == level:
        return
    _configured_level = level

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            _numpy_to_builtin,
            structlog.processors.format_exc_info,
            structlog.processors.JSONRenderer() if settings.log_json else structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=_stderr_logger,
        cache_logger_on_first_use=False,
    )
    # scipy / joblib warnings
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def get_logger(name: str) -> structlog.typing.FilteringBoundLogger:
    """Logger whose records carry ``module=name``."""
    return structlog.get_logger(module=name)
