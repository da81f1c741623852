"""Covariance-based weighting of multiple response series and the joint score.

Each series should get credit in proportion to its independence from the
others, measured by pairwise R^2 between the *observed* series over their
overlapping cases.  For series declared case-unrelated (case_match false)
the computed R^2 is replaced by its expected value under random association,
1/(min(N_i, N_j) - 1), and the pairwise effective sample size falls back
from the overlap count to min(N_i, N_j).

The weight for series i of M (for M >= 3) is

    W_i = (1/M) * [1 + ((M-2)/(M-1)) * (S_excl/(M-2) - S_incl/2)]

where S_excl sums R^2 over the (M-1)(M-2)/2 pairs excluding i and S_incl
over the (M-1) pairs including i (diagonal excluded from both).  The W_i sum
to 1 for any input matrix; M = 2 forces (0.5, 0.5) and M = 1 forces (1.0,).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .dataio import Dataset, overlap_count
from .errors import DegenerateSeriesError, InsufficientOverlapError

MIN_OVERLAP = 3  # pairwise correlations need at least this many shared cases

_INSUFFICIENT_MODES = ("raise", "surrogate")


def _pearson_rsq(a: np.ndarray, b: np.ndarray, pair: str) -> float:
    n = len(a)
    mean_a = math.fsum(a.tolist()) / n
    mean_b = math.fsum(b.tolist()) / n
    da = a - mean_a
    db = b - mean_b
    s_aa = math.fsum((da * da).tolist())
    s_bb = math.fsum((db * db).tolist())
    if s_aa == 0.0 or s_bb == 0.0:
        raise DegenerateSeriesError(
            f"observed values are constant on the overlap of {pair}; the "
            "pairwise correlation is undefined")
    s_ab = math.fsum((da * db).tolist())
    return (s_ab * s_ab) / (s_aa * s_bb)


def _surrogate_rsq(n_i: int, n_j: int) -> float:
    """Expected R^2 under random association of two series."""
    smaller = min(n_i, n_j)
    value = 1.0 / (smaller - 1)
    if smaller <= 2:
        warnings.warn(
            f"random-association R^2 surrogate 1/(min(N)-1) = {value:g} with "
            f"min(N) = {smaller} is anomalous (>= 1)", stacklevel=3)
    return value


def rsq_matrix(dataset: Dataset, *, insufficient: str = "raise") -> np.ndarray:
    """Symmetric MxM matrix of pairwise R^2 over observed series.

    Entry (i, j) is the squared Pearson correlation of the two observed
    series over their overlapping cases when case_match(i, j) is true, and
    the random-association surrogate 1/(min(N_i, N_j) - 1) when false.

    A case-matched pair with fewer than MIN_OVERLAP shared cases raises
    InsufficientOverlapError; with ``insufficient="surrogate"`` the
    random-association surrogate is substituted instead (two shared points
    carry no correlation information, their R^2 is identically 1).
    """
    if insufficient not in _INSUFFICIENT_MODES:
        raise ValueError(f"insufficient must be one of {_INSUFFICIENT_MODES}")
    m = dataset.m
    if m < 2:
        raise ValueError("rsq_matrix needs at least two series")
    rsq = np.eye(m)
    for i, j in combinations(range(m), 2):
        s_i, s_j = dataset.series[i], dataset.series[j]
        if dataset.case_match[i, j]:
            both = s_i.present & s_j.present
            n_overlap = int(both.sum())
            if n_overlap < MIN_OVERLAP:
                if insufficient == "raise":
                    raise InsufficientOverlapError(
                        f"series {s_i.name!r} and {s_j.name!r} are case-matched "
                        f"but share only {n_overlap} overlapping pairs "
                        f"(need {MIN_OVERLAP}); declare them unmatched or use "
                        "the random-association surrogate")
                value = _surrogate_rsq(s_i.n_complete, s_j.n_complete)
            else:
                value = _pearson_rsq(s_i.y_obs[both], s_j.y_obs[both],
                                     f"{s_i.name!r} and {s_j.name!r}")
        else:
            value = _surrogate_rsq(s_i.n_complete, s_j.n_complete)
        rsq[i, j] = rsq[j, i] = value
    return rsq


def insufficient_overlap_pairs(dataset: Dataset) -> list[tuple[int, int]]:
    """Case-matched pairs whose overlap is below MIN_OVERLAP."""
    out = []
    for i, j in combinations(range(dataset.m), 2):
        if dataset.case_match[i, j] and overlap_count(dataset, i, j) < MIN_OVERLAP:
            out.append((i, j))
    return out


def covariance_weights(rsq: np.ndarray) -> np.ndarray:
    """Per-series weights from the R^2 matrix; they always sum to 1.

    Extreme asymmetry can drive a weight negative (at M = 5 a series
    perfectly correlated with four mutually uncorrelated others gets
    1/5 * (1 - 3/4 * 2) = -0.1; at M = 4 the infimum is exactly 0).  Negative
    mixture weights are uninterpretable, so they are clamped to zero with
    renormalization and a warning.
    """
    rsq = np.asarray(rsq, dtype=float)
    m = rsq.shape[0]
    if rsq.shape != (m, m) or not 1 <= m <= 5:
        raise ValueError("rsq must be a square matrix for 1..5 series")
    if m == 1:
        return np.array([1.0])
    if m == 2:
        return np.array([0.5, 0.5])
    pairs = list(combinations(range(m), 2))
    weights = np.empty(m)
    for i in range(m):
        s_incl = sum(rsq[a, b] for a, b in pairs if i in (a, b))
        s_excl = sum(rsq[a, b] for a, b in pairs if i not in (a, b))
        weights[i] = (1.0 / m) * (1.0 + ((m - 2) / (m - 1))
                                  * (s_excl / (m - 2) - s_incl / 2.0))
    if np.any(weights < 0.0):
        warnings.warn("negative covariance weights clamped to zero and "
                      "renormalized", stacklevel=2)
        weights = np.clip(weights, 0.0, None)
        weights /= weights.sum()
    return weights


def effn_values(dataset: Dataset) -> tuple[np.ndarray, np.ndarray, float]:
    """Pairwise, per-series, and system effective sample sizes.

    effn_pair(i, j) is the overlap count for case-matched pairs and
    min(N_i, N_j) otherwise; the diagonal carries each series' own complete
    count (informational, excluded from every average).  effn_series(i) is
    the mean of effn_pair(i, j) over j != i, and the system effn is the mean
    over all i < j pairs -- which reduces to the common N for rectangular
    coverage.  For M = 1 all three collapse to the series' complete count.
    """
    m = dataset.m
    counts = [s.n_complete for s in dataset.series]
    if m == 1:
        n = float(counts[0])
        return np.array([[n]]), np.array([n]), n
    effn_pair = np.zeros((m, m))
    np.fill_diagonal(effn_pair, [float(c) for c in counts])
    for i, j in combinations(range(m), 2):
        if dataset.case_match[i, j]:
            value = float(overlap_count(dataset, i, j))
        else:
            value = float(min(counts[i], counts[j]))
        effn_pair[i, j] = effn_pair[j, i] = value
    off_diag = ~np.eye(m, dtype=bool)
    effn_series = effn_pair[off_diag].reshape(m, m - 1).mean(axis=1)
    iu = np.triu_indices(m, k=1)
    effn = float(effn_pair[iu].mean())
    return effn_pair, effn_series, effn


def final_weights(w_cov, effn_series, importance) -> np.ndarray:
    """Fold per-series effective sample size and importance into the
    covariance weights: w_i ~ W_i * effn_i * importance_i, normalized."""
    w_cov = np.asarray(w_cov, dtype=float)
    effn_series = np.asarray(effn_series, dtype=float)
    importance = np.asarray(importance, dtype=float)
    if not np.all(importance > 0.0):
        raise ValueError("importance weights must be strictly positive")
    product = w_cov * effn_series * importance
    total = math.fsum(product.tolist())
    if total <= 0.0:
        raise ValueError("final weights are not normalizable (zero total)")
    return product / total


def joint_c(component_c, weights) -> float:
    """Weighted combination of per-series scores; weights must sum to 1."""
    component_c = np.asarray(component_c, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if component_c.shape != weights.shape:
        raise ValueError("component scores and weights must align")
    total = math.fsum(weights.tolist())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {total!r}")
    return math.fsum((weights * component_c).tolist())


@dataclass(frozen=True)
class WeightTable:
    """Everything the joint score is built from, for reporting."""

    rsq: np.ndarray
    effn_pair: np.ndarray
    effn_series: np.ndarray
    effn: float
    w_cov: np.ndarray
    w_final: np.ndarray
    joint_c: float
    surrogate_pairs: tuple[tuple[int, int], ...] = ()


def build_weight_table(dataset: Dataset, component_c,
                       *, insufficient: str = "raise") -> WeightTable:
    """Assemble the full weighting table and joint score for a dataset.

    ``component_c`` lists the per-series scores in dataset order.
    ``insufficient`` is forwarded to :func:`rsq_matrix`; pairs that fell back
    to the surrogate are recorded in ``surrogate_pairs``.
    """
    component_c = np.asarray(component_c, dtype=float)
    m = dataset.m
    if component_c.shape != (m,):
        raise ValueError(f"expected {m} component scores")
    effn_pair, effn_series, effn = effn_values(dataset)
    if m == 1:
        return WeightTable(rsq=np.array([[1.0]]), effn_pair=effn_pair,
                           effn_series=effn_series, effn=effn,
                           w_cov=np.array([1.0]), w_final=np.array([1.0]),
                           joint_c=float(component_c[0]))
    surrogates = ()
    if insufficient == "surrogate":
        surrogates = tuple(insufficient_overlap_pairs(dataset))
    rsq = rsq_matrix(dataset, insufficient=insufficient)
    w_cov = covariance_weights(rsq)
    w_final = final_weights(w_cov, effn_series, dataset.importance)
    return WeightTable(rsq=rsq, effn_pair=effn_pair, effn_series=effn_series,
                       effn=effn, w_cov=w_cov, w_final=w_final,
                       joint_c=joint_c(component_c, w_final),
                       surrogate_pairs=surrogates)
