import math
from itertools import permutations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from consilience import (
    DegenerateObservedError,
    NullSpec,
    decompose,
    enumerate_randmix,
    null_distribution,
    randmix_replicate,
    randnorm_replicate,
    replicate_rng,
)

from helpers import restrict


class TestRandMix:
    def test_is_a_permutation(self, rng):
        y = rng.uniform(0, 10, 15)
        out = randmix_replicate(y, rng)
        assert sorted(out.tolist()) == sorted(y.tolist())

    def test_moments_preserved_exactly(self, rng):
        y = rng.uniform(0, 10, 9)
        out = randmix_replicate(y, rng)
        assert math.fsum(out.tolist()) == math.fsum(y.tolist())
        mean = math.fsum(y.tolist()) / 9
        var = lambda a: math.fsum(((a - mean) ** 2).tolist())
        assert var(out) == pytest.approx(var(y), rel=0, abs=0)

    def test_uniform_over_permutations(self):
        # n=3: each of the 6 pairings should appear ~1/6 of the time
        y = np.array([1.0, 2.0, 3.0])
        counts = {p: 0 for p in permutations((1.0, 2.0, 3.0))}
        draws = 6000
        for r in range(draws):
            counts[tuple(randmix_replicate(y, replicate_rng(11, r)))] += 1
        expected = draws / 6
        for count in counts.values():
            assert abs(count - expected) < 5 * math.sqrt(expected)


class TestRandNorm:
    def test_draws_bounded_by_clip(self, rng):
        y = rng.uniform(0, 10, 50)
        mean, sd = y.mean(), y.std(ddof=1)
        bound = 3.0903 * sd  # quantile of 0.999 is ~3.0902
        for r in range(200):
            out = randnorm_replicate(y, replicate_rng(3, r))
            assert np.all(np.abs(out - mean) <= bound)

    def test_degenerate_clip_reproduces_mean_fit(self, rng):
        # clip (0.5, 0.5) forces every draw to the mean: C = (N+1)/2N
        n = 12
        y = rng.uniform(0, 5, n)
        out = randnorm_replicate(y, rng, clip=(0.5, 0.5))
        assert_allclose(out, y.mean(), atol=1e-12)
        assert decompose(y, out).c == pytest.approx((n + 1) / (2 * n), abs=1e-10)

    def test_mean_centres_on_observed_mean(self, rng):
        y = rng.uniform(0, 10, 25)
        draws = np.concatenate([randnorm_replicate(y, replicate_rng(7, r))
                                for r in range(400)])
        se = y.std(ddof=1) / math.sqrt(len(draws))
        assert abs(draws.mean() - y.mean()) < 5 * se

    def test_constant_series_rejected(self, rng):
        with pytest.raises(DegenerateObservedError):
            randnorm_replicate(np.full(5, 3.0), rng)

    def test_too_few_values_rejected(self, rng):
        from consilience import DegenerateDataError
        with pytest.raises(DegenerateDataError):
            randnorm_replicate(np.array([1.0, 2.0]), rng)


class TestNullSpecValidation:
    def test_bad_kind(self):
        with pytest.raises(ValueError):
            NullSpec(kind="uniform", seed=1)

    def test_bad_clip(self):
        with pytest.raises(ValueError):
            NullSpec(kind="randnorm", seed=1, clip=(0.0, 0.999))

    def test_bad_replicates(self):
        with pytest.raises(ValueError):
            NullSpec(kind="randmix", seed=1, replicates=0)

    def test_negative_seed(self):
        with pytest.raises(ValueError):
            NullSpec(kind="randmix", seed=-5)


class TestNullDistribution:
    def test_deterministic_for_fixed_seed(self, patchy25):
        ds = restrict(patchy25, 1)
        spec = NullSpec(kind="randnorm", seed=42, replicates=64)
        a = null_distribution(ds, spec)
        b = null_distribution(ds, spec)
        assert np.array_equal(a.c_values, b.c_values)
        assert a.mean_c == b.mean_c

    def test_identical_across_worker_counts(self, patchy25):
        ds = restrict(patchy25, 2)
        spec = NullSpec(kind="randmix", seed=9, replicates=120)
        serial = null_distribution(ds, spec, workers=1)
        parallel = null_distribution(ds, spec, workers=2)
        assert np.array_equal(serial.c_values, parallel.c_values)

    def test_seed_changes_values(self, patchy25):
        ds = restrict(patchy25, 1)
        a = null_distribution(ds, NullSpec(kind="randnorm", seed=1, replicates=32))
        b = null_distribution(ds, NullSpec(kind="randnorm", seed=2, replicates=32))
        assert not np.array_equal(a.c_values, b.c_values)

    def test_values_sorted_and_quantiles_monotone(self, patchy25):
        ds = restrict(patchy25, 1)
        dist = null_distribution(ds, NullSpec(kind="randnorm", seed=5,
                                              replicates=500))
        assert np.all(np.diff(dist.c_values) >= 0)
        ps = np.linspace(0.01, 0.99, 25)
        qs = [dist.q(p) for p in ps]
        assert all(a <= b + 1e-15 for a, b in zip(qs, qs[1:]))
        assert len(dist.c_values) == 500

    def test_joint_replicates_for_multiseries(self, patchy25):
        dist = null_distribution(patchy25, NullSpec(kind="randmix", seed=3,
                                                    replicates=50))
        assert len(dist.c_values) == 50
        # joint C of shuffled series should hover near the null reference
        assert -1.0 < dist.mean_c < 1.0

    def test_randmix_mean_matches_expectation(self, rng):
        # sampled mean C ~ 1/N within Monte Carlo error
        from consilience import Dataset, ResponseSeries
        n = 6
        y = rng.uniform(0, 10, n)
        series = ResponseSeries(name="a", y_obs=y, y_mod=y.copy(),
                                present=np.ones(n, dtype=bool))
        ds = Dataset(case_ids=tuple(str(k) for k in range(n)), series=(series,))
        dist = null_distribution(ds, NullSpec(kind="randmix", seed=12,
                                              replicates=4000))
        se = dist.c_values.std() / math.sqrt(4000)
        assert abs(dist.mean_c - 1 / n) < 5 * se


class TestEnumeration:
    def test_exact_means_match_closed_forms(self, rng):
        for n in (3, 4, 5, 6):
            y = rng.uniform(0, 10, n)
            res = enumerate_randmix(y)
            assert res.n_pairings == math.factorial(n)
            assert abs(res.mean_mse_sys - 1.0) < 1e-10
            assert abs(res.mean_mse_ran - (n - 2) / n) < 1e-10
            assert abs(res.mean_mse_tot - 2 * (n - 1) / n) < 1e-10
            assert abs(res.mean_c - 1 / n) < 1e-10

    def test_direct_enumeration_oracle_n3(self, rng):
        # the enumeration is its own oracle: recompute mean MSEtot by hand
        y = rng.uniform(0, 10, 3)
        total = [decompose(y, np.array(p)).mse_tot
                 for p in permutations(y.tolist())]
        res = enumerate_randmix(y)
        assert res.mean_mse_tot == pytest.approx(math.fsum(total) / 6, abs=1e-12)
        assert abs(res.mean_mse_tot - 4 / 3) < 1e-10

    def test_closed_forms_hold_across_fuzzed_series(self, rng):
        # 100 random series over n = 3..6, all four moments to 1e-10
        for _ in range(100):
            n = int(rng.integers(3, 7))
            y = rng.normal(rng.uniform(-5, 5), rng.uniform(0.5, 4), n)
            res = enumerate_randmix(y)
            assert abs(res.mean_mse_sys - 1.0) < 1e-10
            assert abs(res.mean_mse_ran - (n - 2) / n) < 1e-10
            assert abs(res.mean_mse_tot - 2 * (n - 1) / n) < 1e-10
            assert abs(res.mean_c - 1 / n) < 1e-10

    def test_ties_flagged(self):
        res = enumerate_randmix([1.0, 1.0, 2.0, 3.0])
        assert res.has_ties
        assert not enumerate_randmix([1.0, 2.0, 3.0]).has_ties

    def test_refuses_large_n(self, rng):
        with pytest.raises(ValueError, match="N <= 8"):
            enumerate_randmix(rng.uniform(0, 1, 9))


class TestReplicateStreams:
    def test_streams_depend_on_index(self):
        a = replicate_rng(5, 0).uniform(size=4)
        b = replicate_rng(5, 1).uniform(size=4)
        assert not np.array_equal(a, b)

    def test_streams_reproducible(self):
        assert np.array_equal(replicate_rng(5, 3).uniform(size=4),
                              replicate_rng(5, 3).uniform(size=4))
