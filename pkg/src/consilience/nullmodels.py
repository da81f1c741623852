"""Null models for the consilience score: RandMix and RandNorm.

RandMix pairs the observed values with a uniformly random permutation of
themselves; exhaustive enumeration over all N! pairings (small N) shows its
exact moments are E(MSE_sys) = 1, E(MSE_ran) = (N-2)/N, E(MSE_tot) =
2(N-1)/N and E(C) = 1/N.  RandNorm draws modeled values from a clipped
normal with the observed series' mean and sample standard deviation, for
which E(C) is close to 1/(2N).

Replicate streams are derived from (seed, replicate index), so a run is
deterministic for a fixed seed and independent of evaluation order or the
number of workers.  Within one replicate the series are drawn in dataset
order from that replicate's stream.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .dataio import Dataset
from .decomposition import decompose
from .errors import DegenerateDataError, DegenerateObservedError
from .special import inverse_normal_cdf
from .weighting import (
    covariance_weights,
    effn_values,
    final_weights,
    rsq_matrix,
)

NULL_KINDS = ("randmix", "randnorm")
DEFAULT_CLIP = (0.001, 0.999)
ENUMERATION_MAX_N = 8  # 8! = 40320 pairings; beyond that enumeration is refused


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """The generator for one replicate, derived from (seed, index)."""
    return np.random.default_rng([int(seed), int(index)])


@dataclass(frozen=True)
class NullSpec:
    """Which null to sample, how many times, and from which seed."""

    kind: str
    seed: int
    replicates: int = 1000
    clip: tuple[float, float] = DEFAULT_CLIP

    def __post_init__(self):
        if self.kind not in NULL_KINDS:
            raise ValueError(f"kind must be one of {NULL_KINDS}, got {self.kind!r}")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be a non-negative 64-bit integer")
        lo, hi = self.clip
        if not 0.0 < lo <= hi < 1.0:
            raise ValueError("clip bounds must satisfy 0 < lo <= hi < 1")


@dataclass(frozen=True)
class NullDistribution:
    """Sorted replicate scores with quantile access."""

    c_values: np.ndarray  # ascending
    mean_c: float

    def q(self, p: float) -> float:
        """Empirical quantile (linear interpolation between order statistics)."""
        return float(np.quantile(self.c_values, p, method="linear"))


def randmix_replicate(y_obs, rng: np.random.Generator) -> np.ndarray:
    """A uniformly random re-pairing: a permutation of the observed values."""
    y_obs = np.asarray(y_obs, dtype=float)
    return rng.permutation(y_obs)


def randnorm_replicate(y_obs, rng: np.random.Generator,
                       clip: tuple[float, float] = DEFAULT_CLIP) -> np.ndarray:
    """Modeled values drawn from a clipped normal matching the observed
    mean and sample standard deviation.

    Uniform draws on (0, 1) are clamped into [clip.lo, clip.hi] before the
    normal quantile, bounding every value near mean +/- 3.09 sd for the
    default clip.  Clamping (with its point masses at the bounds) keeps the
    draw variance at 0.9963 of the target rather than the 0.9791 a uniform
    draw *on* the interval would give, which is what keeps mean C at the
    1/(2N) reference within Monte Carlo error.
    """
    y_obs = np.asarray(y_obs, dtype=float)
    n = len(y_obs)
    if n < 3:
        raise DegenerateDataError("matched-normal draws need at least 3 values")
    mean = math.fsum(y_obs.tolist()) / n
    dev = y_obs - mean
    var = math.fsum((dev * dev).tolist()) / (n - 1)
    if var == 0.0:
        raise DegenerateObservedError(
            "observed values are constant; the matched-normal null is undefined")
    u = np.clip(rng.uniform(0.0, 1.0, n), clip[0], clip[1])
    return mean + math.sqrt(var) * inverse_normal_cdf(u)


def _draw(kind: str, y_obs: np.ndarray, rng: np.random.Generator,
          clip: tuple[float, float]) -> np.ndarray:
    if kind == "randmix":
        return randmix_replicate(y_obs, rng)
    return randnorm_replicate(y_obs, rng, clip)


def _replicate_chunk(payload, indices) -> list[float]:
    """Scores for a block of replicate indices (top level for pickling)."""
    obs_list, null_kind, clip, scalar_kind, seed, weights = payload
    out = []
    for r in indices:
        rng = replicate_rng(seed, r)
        cs = [decompose(y, _draw(null_kind, y, rng, clip), scalar_kind).c
              for y in obs_list]
        if weights is None:
            out.append(cs[0])
        else:
            out.append(math.fsum(w * c for w, c in zip(weights, cs)))
    return out


def null_distribution(dataset: Dataset, spec: NullSpec,
                      kind: str = "stdev", workers: int = 1) -> NullDistribution:
    """Sample the null distribution of C (or joint C for M > 1).

    Every replicate redraws all series' modeled values independently and
    runs the full pipeline.  The weighting layer depends only on the
    observed values, so the weight vector is fixed across replicates and is
    computed once (with the random-association surrogate for under-lapping
    case-matched pairs).  Results are byte-identical for a fixed seed at any
    ``workers`` count.
    """
    obs_list = tuple(s.pairs()[0] for s in dataset.series)
    weights = None
    if dataset.m > 1:
        rsq = rsq_matrix(dataset, insufficient="surrogate")
        _, effn_series, _ = effn_values(dataset)
        weights = tuple(final_weights(covariance_weights(rsq), effn_series,
                                      dataset.importance).tolist())
    payload = (obs_list, spec.kind, spec.clip, kind, int(spec.seed), weights)

    reps = spec.replicates
    if workers <= 1 or reps < 4:
        values = _replicate_chunk(payload, range(reps))
    else:
        chunk = max(32, math.ceil(reps / (workers * 8)))
        blocks = [range(start, min(start + chunk, reps))
                  for start in range(0, reps, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_replicate_chunk, [payload] * len(blocks), blocks)
            values = [c for block in results for c in block]

    c_values = np.sort(np.asarray(values, dtype=float))
    mean_c = math.fsum(values) / reps
    return NullDistribution(c_values=c_values, mean_c=mean_c)


@dataclass(frozen=True)
class RandMixEnumeration:
    """Exact moments of the RandMix null from full enumeration."""

    n: int
    n_pairings: int
    has_ties: bool
    mean_mse_sys: float
    mean_mse_ran: float
    mean_mse_tot: float
    mean_c: float


def enumerate_randmix(y_obs, kind: str = "stdev") -> RandMixEnumeration:
    """Average the decomposition over all N! pairings of y_obs with itself.

    Exact (no sampling); refuses N > ENUMERATION_MAX_N to keep the run
    trivially fast.  Tied observed values are permitted and flagged.
    """
    y_obs = np.asarray(y_obs, dtype=float)
    n = len(y_obs)
    if n > ENUMERATION_MAX_N:
        raise ValueError(
            f"enumeration is limited to N <= {ENUMERATION_MAX_N} "
            f"({math.factorial(ENUMERATION_MAX_N)} pairings); use "
            "null_distribution for larger N")
    sums = [[], [], [], []]
    count = 0
    for perm in permutations(y_obs):
        part = decompose(y_obs, np.asarray(perm), kind)
        sums[0].append(part.mse_sys)
        sums[1].append(part.mse_ran)
        sums[2].append(part.mse_tot)
        sums[3].append(part.c)
        count += 1
    means = [math.fsum(vals) / count for vals in sums]
    return RandMixEnumeration(
        n=n,
        n_pairings=count,
        has_ties=len(set(y_obs.tolist())) < n,
        mean_mse_sys=means[0],
        mean_mse_ran=means[1],
        mean_mse_tot=means[2],
        mean_c=means[3],
    )
