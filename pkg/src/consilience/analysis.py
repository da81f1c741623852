"""Whole-dataset analysis: decomposition, weighting, and significance.

The JSON report is the canonical artifact -- everything in the text table
and the SVG plots is a projection of it.  Reports embed the usable pairs per
series so that plots (and any re-derivation) need nothing but the JSON, and
they carry no timestamps, so a report is byte-for-byte reproducible from the
same input, config, and seed.
"""

from __future__ import annotations

import math

from ._version import __version__
from .critical import (
    TABULATED_ALPHAS,
    critical_c,
    is_calibrated,
    significance_bracket,
)
from .conventional import (
    mssd,
    r_squared,
    residual_regression_test,
    wilcoxon_signed_rank,
)
from .dataio import Dataset
from .decomposition import decompose
from .errors import DegenerateSeriesError
from .weighting import build_weight_table


def _series_entry(series, kind: str) -> dict:
    y_obs, y_mod = series.pairs()
    part = decompose(y_obs, y_mod, kind)
    share_sys, share_ran = part.shares
    try:
        rsq = r_squared(y_obs, y_mod)
    except DegenerateSeriesError:
        rsq = None  # e.g. a constant modeled series; C is still defined
    y_p = part.projection.predict(y_obs)
    return {
        "name": series.name,
        "n": part.n,
        "scalar_value": part.scalar,
        "slope": part.projection.slope,
        "intercept": part.projection.intercept,
        "mse_sys": part.mse_sys,
        "mse_ran": part.mse_ran,
        "mse_tot": part.mse_tot,
        "c": part.c,
        "share_sys": share_sys,
        "share_ran": share_ran,
        "perfect_fit": part.perfect_fit,
        "cross_product_mean": part.cross_product_mean,
        "r_squared": rsq,
        "points": {
            "case_ids": [],
            "y_obs": y_obs.tolist(),
            "y_mod": y_mod.tolist(),
            "y_p": y_p.tolist(),
        },
    }


def analyze(dataset: Dataset, *, scalar: str = "stdev",
            alphas=TABULATED_ALPHAS, seed=None, source=None,
            input_sha256=None, config_echo=None) -> dict:
    """Run the full pipeline on a dataset and return the report dict."""
    warnings_out: list[str] = []
    if scalar != "stdev":
        warnings_out.append(
            f"scalar {scalar!r} is non-landmark: the closed-form reference "
            "values (mean fit, perfect inverse, null expectations) are "
            "guaranteed only for the standard-deviation scalar")

    series_entries = []
    for series in dataset.series:
        entry = _series_entry(series, scalar)
        # report case ids for the usable pairs, in case order
        entry["points"]["case_ids"] = [
            cid for cid, keep in zip(dataset.case_ids, series.present) if keep]
        series_entries.append(entry)

    component_c = [entry["c"] for entry in series_entries]
    table = build_weight_table(dataset, component_c, insufficient="surrogate")
    for i, j in table.surrogate_pairs:
        warnings_out.append(
            f"series {dataset.names[i]!r} and {dataset.names[j]!r} are "
            "case-matched but overlap on too few cases for a correlation; "
            "their R^2 was replaced by the random-association surrogate")

    m_effn = dataset.m * table.effn
    levels = []
    for alpha in alphas:
        value = critical_c(alpha, dataset.m, table.effn)
        levels.append({"alpha": alpha, "critical_c": value,
                       "exceeded": table.joint_c > value})
    low, high = significance_bracket(table.joint_c, dataset.m, table.effn)
    if low is None:
        label = f"stronger than the {high:g} level"
    elif high is None:
        label = f"weaker than the {low:g} level"
    else:
        label = f"between the {low:g} and {high:g} levels"

    return {
        "version": __version__,
        "provenance": {
            "source": source,
            "input_sha256": input_sha256,
            "config": config_echo,
            "seed": seed,
        },
        "scalar": scalar,
        "m": dataset.m,
        "case_count": len(dataset.case_ids),
        "series": series_entries,
        "weighting": {
            "case_match": dataset.case_match.astype(bool).tolist(),
            "importance": dataset.importance.tolist(),
            "rsq": table.rsq.tolist(),
            "effn_pair": table.effn_pair.tolist(),
            "effn_series": table.effn_series.tolist(),
            "w_cov": table.w_cov.tolist(),
            "w_final": table.w_final.tolist(),
            "surrogate_pairs": [list(p) for p in table.surrogate_pairs],
        },
        "effn": table.effn,
        "m_effn": m_effn,
        "joint_c": table.joint_c,
        "critical": {
            "calibrated": is_calibrated(dataset.m, table.effn),
            "levels": levels,
            "bracket": {"alpha_low": low, "alpha_high": high, "label": label},
        },
        "warnings": warnings_out,
    }


def compare(dataset: Dataset, *, scalar: str = "stdev") -> dict:
    """Consilience next to the classical tests, per series."""
    entries = []
    for series in dataset.series:
        y_obs, y_mod = series.pairs()
        part = decompose(y_obs, y_mod, scalar)
        try:
            rsq = r_squared(y_obs, y_mod)
        except DegenerateSeriesError:
            rsq = None
        regression = residual_regression_test(y_obs, y_mod)
        wilcoxon = wilcoxon_signed_rank(y_obs, y_mod)
        entry = {
            "name": series.name,
            "n": part.n,
            "c": part.c,
            "r_squared": rsq,
            "residual_regression": {
                "statistic": regression.statistic,
                "p_value": regression.p_value,
                "method_note": regression.method_note,
            },
            "wilcoxon": {
                "statistic": wilcoxon.statistic,
                "p_value": wilcoxon.p_value,
                "method_note": wilcoxon.method_note,
            },
        }
        se = series.se_pairs()
        if se is not None and not any(math.isnan(v) for v in se.tolist()):
            value, root = mssd(y_obs, y_mod, se)
            entry["mssd"] = value
            entry["rmssd"] = root
        else:
            entry["mssd"] = None
            entry["rmssd"] = None
            entry["mssd_note"] = "no complete standard-error column"
        entries.append(entry)
    return {"version": __version__, "scalar": scalar, "series": entries}


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _table(headers: list[str], rows: list[list]) -> list[str]:
    cells = [[_fmt(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[k]) for r in cells)) if cells else len(h)
              for k, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(widths[k]) for k, h in enumerate(headers)).rstrip()]
    for row in cells:
        lines.append("  ".join(c.ljust(widths[k]) for k, c in enumerate(row)).rstrip())
    return lines


def render_text(report: dict) -> str:
    """Aligned text rendering of an analysis report (6 significant digits)."""
    lines = [f"consilience analysis (scalar: {report['scalar']})",
             f"cases: {report['case_count']}  series: {report['m']}  "
             f"effN: {_fmt(report['effn'])}  M*effN: {_fmt(report['m_effn'])}",
             ""]
    rows = []
    for s in report["series"]:
        rows.append([s["name"], s["n"], s["scalar_value"], s["slope"],
                     s["intercept"], s["mse_sys"], s["mse_ran"], s["mse_tot"],
                     s["c"], s["share_sys"], s["share_ran"], s["r_squared"],
                     s["perfect_fit"]])
    lines += _table(["series", "n", "scalar", "slope", "intercept", "MSEsys",
                     "MSEran", "MSEtot", "C", "sys_share", "ran_share",
                     "R^2", "perfect"], rows)
    lines.append("")

    weighting = report["weighting"]
    rows = []
    for k, s in enumerate(report["series"]):
        rows.append([s["name"], weighting["w_cov"][k],
                     weighting["effn_series"][k], weighting["importance"][k],
                     weighting["w_final"][k]])
    lines += _table(["series", "W_cov", "effN_i", "importance", "W_final"], rows)
    lines.append("")

    lines.append(f"joint C: {_fmt(report['joint_c'])}")
    lines.append(f"critical values at M*effN = {_fmt(report['m_effn'])}:")
    for level in report["critical"]["levels"]:
        status = "exceeded" if level["exceeded"] else "not exceeded"
        lines.append(f"  alpha {level['alpha']:g}: "
                     f"{_fmt(level['critical_c'])}  ({status})")
    lines.append(f"significance: {report['critical']['bracket']['label']}")
    if not report["critical"]["calibrated"]:
        lines.append("note: M*effN is below the calibrated range of the "
                     "critical curves")
    for note in report["warnings"]:
        lines.append(f"warning: {note}")
    lines.append("")
    return "\n".join(lines)


def render_compare_text(report: dict) -> str:
    """Aligned text rendering of a compare report."""
    lines = [f"consilience vs conventional tests (scalar: {report['scalar']})",
             ""]
    rows = []
    for s in report["series"]:
        rows.append([s["name"], s["n"], s["c"], s["r_squared"],
                     s["residual_regression"]["statistic"],
                     s["residual_regression"]["p_value"],
                     s["wilcoxon"]["statistic"], s["wilcoxon"]["p_value"],
                     s["mssd"], s["rmssd"]])
    lines += _table(["series", "n", "C", "R^2", "F", "p_regression",
                     "W", "p_wilcoxon", "MSSD", "RMSSD"], rows)
    lines.append("")
    return "\n".join(lines)
