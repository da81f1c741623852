"""Per-series error decomposition and the consilience score.

For paired observed/modeled values the total error ``y_obs - y_mod`` is split
by the projection line Yp (least-squares regression of y_mod on y_obs) into a
systematic part ``y_obs - Yp`` and a non-systematic part ``Yp - y_mod``.
Each part is divided by a spread scalar of the observed series (sample
standard deviation by default), squared, and averaged over the N pairs:

    MSE_tot = MSE_sys + MSE_ran        (the cross term vanishes identically)
    C       = -(MSE_tot - 2) / 2

so C is 1 for a perfect fit, about 0 for mean-and-variance-matched noise,
and unbounded below for arbitrarily bad models.

Two divisor conventions interlock here and are deliberately fixed: the MSEs
average over N while the standard-deviation scalar uses N - 1.  That exact
combination yields the closed-form landmarks C = (N+1)/(2N) for the mean-fit
model and C = -(N-2)/N for the perfect inverse fit, so it is not
configurable.  Sums are accumulated with compensated summation so the
landmark identities hold to ~1e-15 even for N = 1000.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import MIN_PAIRS, SCALAR_KINDS
from .errors import (
    DegenerateDataError,
    DegenerateObservedError,
    DegenerateScalarError,
)


def _as_pair_arrays(y_obs, y_mod):
    y_obs = np.asarray(y_obs, dtype=float)
    y_mod = np.asarray(y_mod, dtype=float)
    if y_obs.ndim != 1 or y_mod.ndim != 1:
        raise ValueError("expected one-dimensional value arrays")
    if y_obs.shape != y_mod.shape:
        raise ValueError("observed and modeled arrays must have equal length")
    if not (np.all(np.isfinite(y_obs)) and np.all(np.isfinite(y_mod))):
        raise ValueError("values must be finite")
    if len(y_obs) < MIN_PAIRS:
        raise DegenerateDataError(
            f"need at least {MIN_PAIRS} usable pairs, got {len(y_obs)}: with "
            "one or two pairs the projection regression is degenerate and the "
            "non-systematic error is forced to zero")
    return y_obs, y_mod


def _fsum(values: np.ndarray) -> float:
    return math.fsum(values.tolist())


@dataclass(frozen=True)
class ProjectionLine:
    """Least-squares line of y_mod on y_obs; its residuals sum to zero."""

    intercept: float
    slope: float

    def predict(self, y_obs) -> np.ndarray:
        return self.intercept + self.slope * np.asarray(y_obs, dtype=float)


def fit_projection(y_obs, y_mod) -> ProjectionLine:
    """Fit the projection line Yp = intercept + slope * y_obs.

    slope = cov(y_obs, y_mod) / var(y_obs);  requires at least three pairs
    and positive variance in the observed values.
    """
    y_obs, y_mod = _as_pair_arrays(y_obs, y_mod)
    n = len(y_obs)
    mean_obs = _fsum(y_obs) / n
    mean_mod = _fsum(y_mod) / n
    d_obs = y_obs - mean_obs
    s_xx = _fsum(d_obs * d_obs)
    if s_xx == 0.0:
        raise DegenerateObservedError(
            "observed values are constant; the projection regression (and "
            "any spread scalar) is undefined")
    s_xy = _fsum(d_obs * (y_mod - mean_mod))
    slope = s_xy / s_xx
    intercept = mean_mod - slope * mean_obs
    return ProjectionLine(intercept=intercept, slope=slope)


def scalar_value(y_obs, kind: str = "stdev") -> float:
    """Spread scalar of the observed series used to normalize errors.

    stdev   sample standard deviation, sqrt(sum((y - mean)^2) / (n - 1))
    iqr     interquartile range with linear-interpolation quartiles
    mean    |mean|
    median  |median|

    The magnitude is what matters (the scalar only ever enters squared), so
    mean/median report absolute values.  A zero result raises
    DegenerateScalarError.
    """
    if kind not in SCALAR_KINDS:
        raise ValueError(f"scalar kind must be one of {SCALAR_KINDS}, got {kind!r}")
    y_obs = np.asarray(y_obs, dtype=float)
    if len(y_obs) < MIN_PAIRS:
        raise DegenerateDataError(
            f"need at least {MIN_PAIRS} values for a spread scalar")
    if kind == "stdev":
        mean = _fsum(y_obs) / len(y_obs)
        dev = y_obs - mean
        value = math.sqrt(_fsum(dev * dev) / (len(y_obs) - 1))
    elif kind == "iqr":
        q1, q3 = np.percentile(y_obs, [25.0, 75.0], method="linear")
        value = float(q3 - q1)
    elif kind == "mean":
        value = abs(_fsum(y_obs) / len(y_obs))
    else:
        value = abs(float(np.median(y_obs)))
    if value == 0.0:
        raise DegenerateScalarError(
            f"scalar {kind!r} evaluates to zero for this observed series")
    return value


@dataclass(frozen=True)
class ErrorPartition:
    """Full decomposition of one series' modeling error.

    Per-pair arrays hold the unscaled components, which satisfy
    ``total_err = sys_err + ran_err`` exactly.  The MSE fields are means of
    the squared scaled components; ``cross_product_mean`` is the mean of the
    scaled sys*ran products, reported as a numerical-health diagnostic (it is
    zero by construction, to rounding).
    """

    n: int
    scalar_kind: str
    scalar: float
    projection: ProjectionLine
    total_err: np.ndarray
    sys_err: np.ndarray
    ran_err: np.ndarray
    mse_sys: float
    mse_ran: float
    mse_tot: float
    c: float
    cross_product_mean: float

    @property
    def perfect_fit(self) -> bool:
        return self.mse_tot == 0.0

    @property
    def shares(self) -> tuple[float, float]:
        """(systematic, non-systematic) shares of MSE_tot; (0, 0) for a
        perfect fit, where the ratio is undefined."""
        if self.perfect_fit:
            return (0.0, 0.0)
        return (self.mse_sys / self.mse_tot, self.mse_ran / self.mse_tot)


def decompose(y_obs, y_mod, kind: str = "stdev") -> ErrorPartition:
    """Decompose the error of one (y_obs, y_mod) series and score it.

    Averages divide by N (not N - 1); see the module docstring for why that
    pairing with the N-1 scalar is fixed.
    """
    y_obs, y_mod = _as_pair_arrays(y_obs, y_mod)
    n = len(y_obs)
    projection = fit_projection(y_obs, y_mod)
    scalar = scalar_value(y_obs, kind)
    yp = projection.predict(y_obs)

    sys_err = y_obs - yp
    ran_err = yp - y_mod
    total_err = y_obs - y_mod

    scaled_sys = sys_err / scalar
    scaled_ran = ran_err / scalar
    scaled_tot = total_err / scalar

    mse_sys = _fsum(scaled_sys * scaled_sys) / n
    mse_ran = _fsum(scaled_ran * scaled_ran) / n
    mse_tot = _fsum(scaled_tot * scaled_tot) / n
    cross = _fsum(scaled_sys * scaled_ran) / n
    c = -(mse_tot - 2.0) / 2.0

    return ErrorPartition(
        n=n,
        scalar_kind=kind,
        scalar=scalar,
        projection=projection,
        total_err=total_err,
        sys_err=sys_err,
        ran_err=ran_err,
        mse_sys=mse_sys,
        mse_ran=mse_ran,
        mse_tot=mse_tot,
        c=c,
        cross_product_mean=cross,
    )


def consilience_score(y_obs, y_mod, kind: str = "stdev") -> float:
    """The consilience score C for one series; shorthand for
    ``decompose(y_obs, y_mod, kind).c``."""
    return decompose(y_obs, y_mod, kind).c
