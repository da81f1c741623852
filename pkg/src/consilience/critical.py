"""Empirical critical values of C against the matched-normal null.

The critical curve at significance level alpha is

    C'(alpha) = 1 - X^n / (Xh^n + X^n),   X = log10(M * effN)

with (n, size_at_half) fitted per tabulated alpha.  The tabulated
``size_at_half`` values are on the M*effN scale, so Xh = log10(size_at_half);
that is the only reading under which the curve family passes through 0.5 at
its nominal half-points and reproduces the ~0.36 critical value at
M*effN = 30, alpha = 0.05.  One curve family serves both single-series C and
joint C; the relevant sample size is always the product M * effN.

Only the five tabulated alphas are supported -- the family is empirical and
interpolating between fits would manufacture precision.  Arbitrary levels
should be answered by sampling the null directly (nullmodels module).
"""

from __future__ import annotations

import math

from .errors import UntabulatedAlphaError

# alpha -> (exponent, M*effN at which C' = 0.5), trial-and-error fits
# against ranked matched-normal null samples.
CRITICAL_ROWS: tuple[tuple[float, float, float], ...] = (
    (0.01, 2.85, 25.0),
    (0.05, 2.50, 15.0),
    (0.10, 2.25, 11.0),
    (0.25, 1.90, 4.5),
    (0.50, 1.70, 2.3),
)

TABULATED_ALPHAS: tuple[float, ...] = tuple(row[0] for row in CRITICAL_ROWS)

# Below this M*effN the parameter fits were never exercised; values are
# computable down to M*effN > 1 but should be labelled uncalibrated.
CALIBRATED_MIN_SIZE = 2.0


def _row(alpha: float) -> tuple[float, float, float]:
    for row in CRITICAL_ROWS:
        if abs(row[0] - alpha) < 1e-12:
            return row
    raise UntabulatedAlphaError(
        f"alpha {alpha!r} is not tabulated (levels: {TABULATED_ALPHAS}); "
        "for other levels sample the null distribution directly")


def is_calibrated(m: float, effn: float) -> bool:
    return m * effn >= CALIBRATED_MIN_SIZE


def critical_c(alpha: float, m: float, effn: float) -> float:
    """Critical value C'(alpha) at sample size M * effN.

    Scores above the returned value arise from the matched-normal null with
    probability about alpha.  Requires M * effN > 1 (the log scale must be
    positive); sizes below CALIBRATED_MIN_SIZE compute but extrapolate.
    """
    _, exponent, size_at_half = _row(alpha)
    size = m * effn
    if size <= 1.0:
        raise ValueError(f"M * effN must exceed 1, got {size!r}")
    x = math.log10(size)
    x_half = math.log10(size_at_half)
    ratio = x ** exponent
    return 1.0 - ratio / (x_half ** exponent + ratio)


def significance_bracket(c_observed: float, m: float, effn: float
                         ) -> tuple[float | None, float | None]:
    """Bracket an observed score between tabulated significance levels.

    Returns (alpha_low, alpha_high) such that the attained significance
    lies between them: C'(alpha_low) >= c_observed > C'(alpha_high).
    A score above C'(0.01) returns (None, 0.01) (stronger than the
    strictest tabulated level); one at or below C'(0.50) returns
    (0.50, None).
    """
    criticals = [(alpha, critical_c(alpha, m, effn))
                 for alpha in TABULATED_ALPHAS]
    if c_observed > criticals[0][1]:
        return (None, criticals[0][0])
    for (alpha_hi_sig, c_hi), (alpha_lo_sig, c_lo) in zip(criticals, criticals[1:]):
        if c_lo < c_observed <= c_hi:
            return (alpha_hi_sig, alpha_lo_sig)
    return (criticals[-1][0], None)


def nomogram_table(sizes) -> list[dict]:
    """Rows of C' per tabulated alpha over a grid of M*effN sizes, for
    plotting or CSV export."""
    rows = []
    for size in sizes:
        row = {"m_effn": float(size)}
        for alpha in TABULATED_ALPHAS:
            row[f"critical_c_{alpha:g}"] = critical_c(alpha, 1.0, float(size))
        rows.append(row)
    return rows
