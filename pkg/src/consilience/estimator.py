"""Scikit-learn style front end for the per-series decomposition.

The decomposition *is* a fit: the projection line is a least-squares
regression of modeled on observed values, and the goodness-of-fit partition
falls out of its residuals.  ``ConsilienceScorer`` exposes that as a routine
estimator -- ``fit`` learns the line and the error partition, ``predict``
evaluates the line, ``score`` returns C -- so it composes with pipelines,
``clone`` and ``get_params`` like any other estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_consistent_length, check_is_fitted

from .dataio import SCALAR_KINDS
from .decomposition import decompose


def _validated_pair(y_obs, y_mod):
    y_obs = check_array(y_obs, ensure_2d=False, dtype=np.float64)
    y_mod = check_array(y_mod, ensure_2d=False, dtype=np.float64)
    if y_obs.ndim != 1 or y_mod.ndim != 1:
        raise ValueError("expected one-dimensional arrays of paired values")
    check_consistent_length(y_obs, y_mod)
    return y_obs, y_mod


class ConsilienceScorer(BaseEstimator):
    """Scores model-vs-observation agreement for one response series.

    Parameters
    ----------
    scalar : {"stdev", "iqr", "mean", "median"}, default="stdev"
        Spread measure of the observed values used to normalize errors.
        The closed-form landmark values hold only for "stdev".

    Attributes (after fit)
    ----------------------
    slope_, intercept_ : float
        The projection line (least squares of modeled on observed).
    c_ : float
        The consilience score: 1 for a perfect fit, ~0 for matched noise.
    mse_sys_, mse_ran_, mse_tot_ : float
        Scaled mean squared errors; mse_tot_ = mse_sys_ + mse_ran_.
    scalar_value_ : float
        The evaluated spread scalar.
    partition_ : ErrorPartition
        The full per-pair decomposition.

    Examples
    --------
    >>> obs = [1.0, 2.0, 3.0, 4.0]
    >>> ConsilienceScorer().fit(obs, obs).c_
    1.0
    """

    def __init__(self, scalar: str = "stdev"):
        self.scalar = scalar

    def _check_scalar(self) -> str:
        if self.scalar not in SCALAR_KINDS:
            raise ValueError(f"scalar must be one of {SCALAR_KINDS}, "
                             f"got {self.scalar!r}")
        return self.scalar

    def fit(self, y_obs, y_mod):
        """Fit the projection line and decompose the error."""
        y_obs, y_mod = _validated_pair(y_obs, y_mod)
        part = decompose(y_obs, y_mod, self._check_scalar())
        self.partition_ = part
        self.slope_ = part.projection.slope
        self.intercept_ = part.projection.intercept
        self.scalar_value_ = part.scalar
        self.mse_sys_ = part.mse_sys
        self.mse_ran_ = part.mse_ran
        self.mse_tot_ = part.mse_tot
        self.c_ = part.c
        self.n_ = part.n
        return self

    def predict(self, y_obs) -> np.ndarray:
        """Evaluate the fitted projection line at new observed values."""
        check_is_fitted(self, "partition_")
        y_obs = check_array(y_obs, ensure_2d=False, dtype=np.float64)
        return self.partition_.projection.predict(y_obs)

    def score(self, y_obs, y_mod) -> float:
        """Consilience score of the given pairs (higher is better, max 1)."""
        y_obs, y_mod = _validated_pair(y_obs, y_mod)
        return decompose(y_obs, y_mod, self._check_scalar()).c
