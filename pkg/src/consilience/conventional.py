"""Classical companions to the consilience score.

These answer a different question: not "how close is the model to the
data" but "is the model statistically distinguishable from the perfect
model y_mod = y_obs".  A noisier model is *harder* to distinguish, so these
p-values can rank models opposite to C; both views are reported side by
side by the CLI's compare command.

Note the signed-rank test is reluctant to reject when the regression of
y_mod on y_obs crosses the identity line: positive and negative differences
then balance even under strong systematic error.  That is a property of the
test, not a defect of the implementation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import MIN_PAIRS
from .errors import DegenerateDataError, DegenerateSeriesError
from .special import f_survival, normal_cdf

EXACT_WILCOXON_MAX_N = 20  # beyond this the normal approximation takes over


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    method_note: str


def _validate(y_obs, y_mod):
    y_obs = np.asarray(y_obs, dtype=float)
    y_mod = np.asarray(y_mod, dtype=float)
    if y_obs.shape != y_mod.shape or y_obs.ndim != 1:
        raise ValueError("expected two aligned one-dimensional arrays")
    if len(y_obs) < MIN_PAIRS:
        raise DegenerateDataError(f"need at least {MIN_PAIRS} pairs")
    return y_obs, y_mod


def r_squared(y_obs, y_mod) -> float:
    """Squared Pearson correlation of the paired series."""
    y_obs, y_mod = _validate(y_obs, y_mod)
    n = len(y_obs)
    da = y_obs - math.fsum(y_obs.tolist()) / n
    db = y_mod - math.fsum(y_mod.tolist()) / n
    s_aa = math.fsum((da * da).tolist())
    s_bb = math.fsum((db * db).tolist())
    if s_aa == 0.0 or s_bb == 0.0:
        raise DegenerateSeriesError("a constant series has no correlation")
    s_ab = math.fsum((da * db).tolist())
    return (s_ab * s_ab) / (s_aa * s_bb)


def residual_regression_test(y_obs, y_mod) -> TestResult:
    """Regress the differences y_mod - y_obs on y_obs with no intercept and
    F-test the slope.

    Small p means the model's deviation from y_mod = y_obs has structure the
    regression can see.  All-zero differences are reported as perfect
    agreement with p = 1 (the F ratio is 0/0 there).
    """
    y_obs, y_mod = _validate(y_obs, y_mod)
    n = len(y_obs)
    d = y_mod - y_obs
    s_yy = math.fsum((y_obs * y_obs).tolist())
    if s_yy == 0.0:
        raise DegenerateSeriesError("all observed values are zero; the "
                                    "no-intercept regression is undefined")
    total_ss = math.fsum((d * d).tolist())
    if total_ss == 0.0:
        return TestResult(statistic=0.0, p_value=1.0,
                          method_note="perfect agreement (all differences zero)")
    slope = math.fsum((d * y_obs).tolist()) / s_yy
    regression_ss = slope * slope * s_yy
    residual_ss = max(total_ss - regression_ss, 0.0)
    if residual_ss == 0.0:
        return TestResult(statistic=math.inf, p_value=0.0,
                          method_note="exact linear deviation (zero residual)")
    f = regression_ss / (residual_ss / (n - 1))
    return TestResult(statistic=f, p_value=f_survival(f, 1.0, float(n - 1)),
                      method_note="F(1, n-1) upper tail via incomplete beta")


def _average_ranks(values: np.ndarray) -> np.ndarray:
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j + 2) / 2.0  # average of ranks i+1..j+1
        i = j + 1
    return ranks


def signed_rank_distribution(ranks) -> tuple[np.ndarray, np.ndarray]:
    """Exact null distribution of the positive-rank sum W+.

    Counts every one of the 2^n sign assignments by subset-sum recursion
    over the ranks.  Average ranks are multiples of 1/2, so doubling puts
    the walk on an integer lattice and keeps tied inputs exact.  Returns
    (support values of W+, probabilities); the probabilities sum to 1.
    """
    ranks = np.asarray(ranks, dtype=float)
    doubled = np.rint(2.0 * ranks).astype(np.int64)
    if not np.allclose(doubled, 2.0 * ranks):
        raise ValueError("ranks must be multiples of 1/2")
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled.tolist():
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:total + 1 - r]
        counts = counts + shifted
    support = np.arange(total + 1) / 2.0
    return support, counts / (2.0 ** len(ranks))


def wilcoxon_signed_rank(y_obs, y_mod) -> TestResult:
    """Signed-rank test of H0: the differences are symmetric about zero.

    W is the smaller of the positive/negative rank sums of |y_mod - y_obs|,
    with average ranks for ties and zero differences discarded (so a perfect
    model gives W = 0 with p = 1, flagged as carrying no signal).  The
    two-sided p-value is exact (all 2^n sign assignments) up to
    EXACT_WILCOXON_MAX_N non-zero differences; beyond that a normal
    approximation with tie and continuity corrections is used.
    """
    y_obs, y_mod = _validate(y_obs, y_mod)
    d = y_mod - y_obs
    d = d[d != 0.0]
    n = len(d)
    if n == 0:
        return TestResult(statistic=0.0, p_value=1.0,
                          method_note="no signal: all differences zero")
    ranks = _average_ranks(np.abs(d))
    w_pos = math.fsum(ranks[d > 0].tolist())
    w_neg = math.fsum(ranks[d < 0].tolist())
    w = min(w_pos, w_neg)

    if n <= EXACT_WILCOXON_MAX_N:
        support, pmf = signed_rank_distribution(ranks)
        # Symmetric null: P(W+ <= w) + P(W+ >= total - w) = 2 P(W+ <= w).
        p = 2.0 * float(pmf[support <= w + 1e-9].sum())
        return TestResult(statistic=w, p_value=min(p, 1.0),
                          method_note=f"exact enumeration of 2^{n} sign "
                                      "assignments")

    mean = n * (n + 1) / 4.0
    _, tie_counts = np.unique(np.abs(d), return_counts=True)
    tie_term = float(np.sum(tie_counts ** 3 - tie_counts)) / 48.0
    var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term
    z = (w - mean + 0.5) / math.sqrt(var)  # w <= mean, continuity toward it
    p = min(2.0 * normal_cdf(z), 1.0)
    return TestResult(statistic=w, p_value=p,
                      method_note="normal approximation with tie and "
                                  "continuity correction")


def mssd(y_obs, y_mod, se) -> tuple[float, float]:
    """Mean squared scaled deviation and its root.

    Each pair's deviation is scaled by its own standard error, so unlike the
    constant-scalar decomposition there is no exact systematic/random split
    here.  Requires a positive standard error for every pair.
    """
    y_obs, y_mod = _validate(y_obs, y_mod)
    se = np.asarray(se, dtype=float)
    if se.shape != y_obs.shape:
        raise ValueError("standard errors must align with the pairs")
    if not np.all(np.isfinite(se)) or np.any(se <= 0.0):
        raise ValueError("every pair needs a positive, finite standard error")
    scaled = (y_obs - y_mod) / se
    value = math.fsum((scaled * scaled).tolist()) / len(y_obs)
    return value, math.sqrt(value)
