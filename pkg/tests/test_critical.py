import numpy as np
import pytest

from consilience import (
    CRITICAL_ROWS,
    TABULATED_ALPHAS,
    UntabulatedAlphaError,
    critical_c,
    nomogram_table,
    significance_bracket,
)
from consilience.critical import is_calibrated


class TestCriticalC:
    def test_anchor_value(self):
        assert 0.34 <= critical_c(0.05, 1, 30) <= 0.38
        assert critical_c(0.05, 1, 30) == pytest.approx(0.3613, abs=5e-4)

    def test_joint_and_single_share_the_curve(self):
        # M=3 with effN=10 sits at the same size as M=1 with N=30
        assert critical_c(0.05, 3, 10) == critical_c(0.05, 1, 30)

    def test_half_points(self):
        for alpha, _, size_at_half in CRITICAL_ROWS:
            assert critical_c(alpha, 1, size_at_half) == pytest.approx(0.5, abs=1e-12)

    def test_monotone_in_sample_size(self):
        sizes = np.logspace(np.log10(2), np.log10(5000), 300)
        for alpha in TABULATED_ALPHAS:
            values = [critical_c(alpha, 1, s) for s in sizes]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_monotone_in_alpha(self):
        for size in (3, 5, 10, 30, 100, 1000):
            values = [critical_c(alpha, 1, size) for alpha in TABULATED_ALPHAS]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_vanishes_for_huge_samples(self):
        for alpha in TABULATED_ALPHAS:
            assert critical_c(alpha, 1, 1e9) < 0.05
            assert critical_c(alpha, 1, 1e12) < critical_c(alpha, 1, 1e9)

    def test_untabulated_alpha_directs_to_null_sampling(self):
        with pytest.raises(UntabulatedAlphaError, match="null"):
            critical_c(0.03, 1, 30)

    def test_size_must_exceed_one(self):
        with pytest.raises(ValueError):
            critical_c(0.05, 1, 1.0)

    def test_calibration_flag(self):
        assert not is_calibrated(1, 1.5)
        assert is_calibrated(1, 2.0)


class TestBracket:
    def test_interior_bracket(self):
        # c = 0.36 at size 30 sits just under the 0.05 curve (0.3613)
        assert significance_bracket(0.36, 1, 30) == (0.05, 0.10)

    def test_perfect_fit_beats_everything(self):
        for size in (2.5, 10, 300):
            assert significance_bracket(1.0, 1, size) == (None, 0.01)

    def test_zero_score_below_weakest_level(self):
        # C'(0.50) at size 30 is ~0.084 > 0
        assert critical_c(0.50, 1, 30) > 0.0
        assert significance_bracket(0.0, 1, 30) == (0.50, None)

    def test_brackets_tile_the_line(self):
        lows_highs = [significance_bracket(c, 1, 30)
                      for c in np.linspace(-0.5, 1.0, 200)]
        for low, high in lows_highs:
            assert low in (None,) + TABULATED_ALPHAS
            assert high in (None,) + TABULATED_ALPHAS
            if low is not None and high is not None:
                assert low < high


class TestMonteCarloConsistency:
    @pytest.mark.parametrize("n", [10, 30, 100])
    def test_empirical_quantile_tracks_curve(self, n):
        # the alpha=0.05 curve should sit near the matched-normal null's
        # 95th percentile; +-0.05 reflects the curve's own fit quality
        from consilience import decompose, randnorm_replicate, replicate_rng

        seed = 971 + n
        y = np.random.default_rng(seed).uniform(0.0, 10.0, n)
        reps = 10000
        cs = np.empty(reps)
        for r in range(reps):
            cs[r] = decompose(y, randnorm_replicate(y, replicate_rng(seed, r))).c
        q95 = float(np.quantile(cs, 0.95))
        assert abs(q95 - critical_c(0.05, 1, n)) <= 0.05


class TestNomogramTable:
    def test_rows_cover_grid(self):
        rows = nomogram_table([2, 30, 1000])
        assert len(rows) == 3
        assert rows[1]["m_effn"] == 30
        assert rows[1]["critical_c_0.05"] == pytest.approx(
            critical_c(0.05, 1, 30))
        for alpha in TABULATED_ALPHAS:
            assert f"critical_c_{alpha:g}" in rows[0]
