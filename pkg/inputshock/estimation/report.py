"""Text renderings of DID results."""

from __future__ import annotations

from typing import Sequence

from scipy import stats

from .design import POST, TREATMENT
from .schemas import DidResult, EventStudyResult


def stars(p_value: float) -> str:
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.1:
        return "*"
    return ""


def _cell(coef: float, p: float) -> str:
    return f"{coef:.4f}{stars(p)}"


def format_buildup_table(results: Sequence[DidResult]) -> str:
    """Columns [1]..[k], one per result; robust SEs in parentheses."""
    if not results:
        return ""

    rows: list[str] = [POST, TREATMENT]
    for r in results:
        rows += [c for c in r.control_coefficients if c not in rows]

    label_w = max(16, *(len(r) for r in rows)) + 2
    col_w = 16
    header = " " * label_w + "".join(f"[{i + 1}]".rjust(col_w) for i in range(len(results)))
    lines = [header, "-" * len(header)]

    def coef_and_se(r: DidResult, name: str) -> tuple[str, str]:
        if name == TREATMENT:
            return _cell(r.beta2, r.p_value), f"({r.beta2_se:.4f})"
        if name == POST:
            if r.beta1 is None:
                return "partialled out", ""
            se = r.beta1_se or 0.0
            p = 2 * stats.t.sf(abs(r.beta1 / se), r.coefficient_df.get(POST, r.df)) if se > 0 else 1.0
            return _cell(r.beta1, p), f"({se:.4f})"
        if name not in r.control_coefficients:
            return "", ""
        b, se = r.control_coefficients[name], r.control_std_errors[name]
        p = 2 * stats.t.sf(abs(b / se), r.coefficient_df.get(name, r.df)) if se > 0 else 1.0
        return _cell(b, p), f"({se:.4f})"

    for name in rows:
        pairs = [coef_and_se(r, name) for r in results]
        lines.append(name.ljust(label_w) + "".join(c.rjust(col_w) for c, _ in pairs))
        if any(s for _, s in pairs):
            lines.append(" " * label_w + "".join(s.rjust(col_w) for _, s in pairs))

    lines.append("-" * len(header))
    for label, values in (
        ("Observations", [str(r.n_obs) for r in results]),
        ("R-squared", [f"{r.r_squared:.4f}" for r in results]),
        ("# firms", [str(r.n_firms) for r in results]),
    ):
        lines.append(label.ljust(label_w) + "".join(v.rjust(col_w) for v in values))

    dropped = sorted({c for r in results for c in r.dropped_columns})
    lines.append("Robust standard errors in parentheses. *** p<0.01, ** p<0.05, * p<0.1.")
    if dropped:
        lines.append(f"Partialled out (collinear with fixed effects): {', '.join(dropped)}")
    return "\n".join(lines)


def format_did_report(result: DidResult) -> str:
    """Flat ``key: value`` listing."""
    fields = {
        "level": result.level,
        "control_level": result.control_level.value,
        "beta2": f"{result.beta2:.6f}",
        "beta2_se": f"{result.beta2_se:.6f}",
        "t_stat": f"{result.t_stat:.4f}",
        "p_value": f"{result.p_value:.4f}",
        "ci": f"[{result.ci_low:.6f}, {result.ci_high:.6f}]",
        "beta1": "partialled out" if result.beta1 is None else f"{result.beta1:.6f}",
        "r_squared": f"{result.r_squared:.4f}",
        "n_obs": str(result.n_obs),
        "n_firms": str(result.n_firms),
        "n_dropped_missing": str(result.n_dropped_missing),
        "dropped_columns": ", ".join(result.dropped_columns) or "-",
        "cov": result.cov_kind,
        "df": f"{result.df:.2f}",
    }
    return "\n".join(f"{k}: {v}" for k, v in fields.items())


def format_event_study(result: EventStudyResult) -> str:
    lines = [f"base_year: {result.base_year}"]
    lines += [f"{c.year}: {c.coef:+.4f} ({c.se:.4f}) p={c.p_value:.3f}" for c in result.coefficients]
    w = result.pre_policy_wald
    lines.append(f"pre-policy joint test: chi2({w.df}) = {w.statistic:.2f} "
                 f"(p-value: {w.p_value:.4f}; asymptotic {w.chi2_p_value:.4f})")
    if w.restrictions > w.df:
        lines.append(f"  rank-deficient covariance: {w.df} of {w.restrictions} restrictions tested")
    return "\n".join(lines)
