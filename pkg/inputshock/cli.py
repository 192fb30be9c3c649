"""Command-line interface.

Usage:
    inputshock figure4       [--config run.json] [--out DIR]
    inputshock equilibrium   [--config run.json] [--out DIR]
    inputshock simulate      [--config run.json] [--out DIR] [--seed N]
    inputshock estimate      [--config run.json] [--out DIR] [--panel CSV]
    inputshock event-study   [--config run.json] [--out DIR] [--panel CSV]
    inputshock validate      [--config run.json] [--out DIR] [--seed N] [--reps R]
    inputshock config-schema

Data go to files under --out, a short summary to stdout, logs to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from .config import settings
from .data.generator import adoption_counts, covariate_distribution, simulate_panel, summary_statistics
from .data.panel_io import export_csv, import_csv
from .data.schemas import PanelData
from .errors import CalibrationError, IntegrabilityError, PanelSchemaError
from .estimation.aggregate import aggregate_rows, estimate_aggregate
from .estimation.did import estimate_buildup, estimate_did, event_study
from .estimation.report import format_buildup_table, format_did_report, format_event_study
from .market.equilibrium import equilibrium_curves, policy_experiment
from .model.firm import probability_check, probability_curve
from .run_config import RunConfig
from .utils.logging_config import get_logger, setup_logging
from .validation.montecarlo import run_validation

log = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2

_CONFIG_ERRORS = (ValidationError, PanelSchemaError, CalibrationError, IntegrabilityError,
                  FileNotFoundError, json.JSONDecodeError)


def _write_json(path: Path, payload: BaseModel | dict) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = payload.model_dump_json(indent=2) if isinstance(payload, BaseModel) else json.dumps(payload, indent=2)
    path.write_text(text + "\n", encoding="utf-8")
    return path


def _write_csv(path: Path, frame: pd.DataFrame) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def _panel_for(args: argparse.Namespace, cfg: RunConfig) -> PanelData:
    source = args.panel or cfg.panel_csv
    if source is None:
        raise FileNotFoundError("no panel given: pass --panel or set panel_csv in the config")
    return import_csv(source)


# ── Commands ─────────────────────────────────────────────

def cmd_figure4(args: argparse.Namespace, cfg: RunConfig) -> int:
    grid = cfg.figure4
    curve = probability_curve(cfg.model, grid.deltas(), grid.etas)
    path = _write_csv(args.out / "figure4.csv", curve)
    print(f"figure4: {len(curve)} rows -> {path}")
    if grid.mc_draws > 0:
        rng = np.random.default_rng(cfg.seed if cfg.seed is not None else settings.random_seed)
        check = probability_check(cfg.model, grid.deltas(), grid.etas, rng, grid.mc_draws)
        _write_csv(args.out / "figure4_check.csv", check)
        print(f"simulated check: max |z| = {check['z'].abs().max():.2f} over {len(check)} points")
    return EXIT_OK


def cmd_equilibrium(args: argparse.Namespace, cfg: RunConfig) -> int:
    result = policy_experiment(cfg.market)
    _write_json(args.out / "equilibrium.json", result)
    _write_csv(args.out / "equilibrium_curves.csv", equilibrium_curves(cfg.market))
    print(f"regime: {result.regime.value}")
    print(f"delta*: {result.before.delta_star:.6f} -> {result.after.delta_star:.6f}")
    print(f"P(ofdi): {result.before.p_ofdi:.6f} -> {result.after.p_ofdi:.6f} (change {result.delta_p_ofdi:+.6f})")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, cfg: RunConfig) -> int:
    panel = simulate_panel(cfg.panel)
    export_csv(panel, args.out / "panel.csv")
    if panel.metadata is not None:
        _write_json(args.out / "panel_metadata.json", panel.metadata)
    stats = summary_statistics(panel)
    distribution = covariate_distribution(panel)
    _write_csv(args.out / "summary_statistics.csv", stats.reset_index())
    _write_csv(args.out / "covariate_distribution.csv", distribution)
    _write_csv(args.out / "adoption_counts.csv", adoption_counts(panel).reset_index())
    print(stats.to_string(float_format=lambda v: f"{v:.4f}"))
    print(distribution.to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace, cfg: RunConfig) -> int:
    panel = _panel_for(args, cfg)
    result = estimate_did(panel, cfg.did)
    buildup = estimate_buildup(panel, cfg.did, skip_unidentified=True)
    aggregate = estimate_aggregate(panel, cfg.did)
    table = format_buildup_table(buildup)

    _write_json(args.out / "did_result.json", result)
    _write_json(args.out / "did_buildup.json", {"results": [r.model_dump(mode="json") for r in buildup]})
    _write_json(args.out / "aggregate_result.json", aggregate)
    (args.out / "did_table.txt").write_text(table + "\n", encoding="utf-8")
    (args.out / "did_report.txt").write_text(format_did_report(result) + "\n", encoding="utf-8")
    _write_csv(args.out / "aggregate_cells.csv",
               pd.DataFrame([r.model_dump() for r in aggregate_rows(panel)], columns=["group", "year", "p_hat", "n_firms"]))
    print(table)
    return EXIT_OK


def cmd_event_study(args: argparse.Namespace, cfg: RunConfig) -> int:
    panel = _panel_for(args, cfg)
    result = event_study(panel, cfg.did, base_year=args.base_year)
    _write_json(args.out / "event_study.json", result)
    _write_csv(args.out / "event_study.csv",
               pd.DataFrame([c.model_dump() for c in result.coefficients], columns=["year", "coef", "se", "df", "p_value"]))
    print(format_event_study(result))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace, cfg: RunConfig) -> int:
    summary = run_validation(cfg.validate_)
    _write_json(args.out / "validation.json", summary)
    print(f"replications: {summary.replications}")
    print(f"mean beta2: {summary.mean_beta2:.4f} (truth {summary.true_beta2:.4f}, bias {summary.bias:+.4f})")
    print(f"rmse: {summary.rmse:.4f}  coverage: {summary.coverage:.3f}  rejection: {summary.rejection_rate:.3f}")
    if summary.wald_rejection_rate is not None:
        print(f"pre-trend Wald rejection: {summary.wald_rejection_rate:.3f} ({summary.wald_available} tests)")
    if summary.pre_coefficient_rejection:
        worst = max(summary.pre_coefficient_rejection.values())
        print(f"pre-policy coefficient rejection: max {worst:.3f} over {len(summary.pre_coefficient_rejection)} years")
    return EXIT_OK


def cmd_config_schema(args: argparse.Namespace, cfg: RunConfig) -> int:
    print(json.dumps(RunConfig.model_json_schema(by_alias=True), indent=2))
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "figure4": cmd_figure4,
    "equilibrium": cmd_equilibrium,
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "event-study": cmd_event_study,
    "validate": cmd_validate,
    "config-schema": cmd_config_schema,
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON run configuration")
    common.add_argument("--out", type=Path, default=Path("out"), help="Output directory (default: ./out)")
    common.add_argument("--seed", type=int, default=None, help="Root seed override")
    common.add_argument("--reps", type=_positive_int, default=None, help="Replication count override")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors")

    parser = argparse.ArgumentParser(
        prog="inputshock",
        description="Input-cost shocks and vertical OFDI: model curves, market equilibria, panel DID",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("figure4", parents=[common], help="OFDI probability curves by eta")
    sub.add_parser("equilibrium", parents=[common], help="Input-market equilibrium before/after the ban")
    sub.add_parser("simulate", parents=[common], help="Simulate a firm-year panel to CSV")
    for name, text in (("estimate", "DID build-up and aggregate estimates"),
                       ("event-study", "Year-by-treatment interactions and pre-trend test")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--panel", type=Path, default=None, help="Panel CSV (overrides panel_csv)")
        if name == "event-study":
            p.add_argument("--base-year", type=int, default=None, help="Omitted year (default: first)")
    sub.add_parser("validate", parents=[common], help="Monte Carlo replication study")
    sub.add_parser("config-schema", parents=[common], help="Print the run-config JSON schema")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(quiet=args.quiet)
    try:
        cfg = RunConfig.load(args.config).with_overrides(seed=args.seed, replications=args.reps)
        return _COMMANDS[args.command](args, cfg)
    except _CONFIG_ERRORS as exc:
        log.error("invalid_input", command=args.command, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        log.error("command_failed", command=args.command, error=repr(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
