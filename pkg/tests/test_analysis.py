import json
import math

import numpy as np
import pytest

from consilience import analyze, compare, parse_dataset, render_compare_text, render_text

from helpers import all_unmatched, restrict


def _single_series_csv(y_obs, y_mod, name="resp"):
    lines = [f"case,{name}_obs,{name}_mod"]
    for k, (a, b) in enumerate(zip(y_obs, y_mod)):
        lines.append(f"r{k},{float(a)!r},{float(b)!r}")
    return "\n".join(lines) + "\n"


class TestAnalyzeReport:
    def test_perfect_fit_report(self, rng):
        y = rng.uniform(0, 10, 10)
        report = analyze(parse_dataset(_single_series_csv(y, y)))
        entry = report["series"][0]
        assert entry["c"] == 1.0
        assert entry["perfect_fit"] is True
        assert entry["share_sys"] == 0.0 and entry["share_ran"] == 0.0
        assert report["joint_c"] == 1.0
        assert report["critical"]["bracket"] == {
            "alpha_low": None, "alpha_high": 0.01,
            "label": "stronger than the 0.01 level"}

    def test_shares_sum_to_one(self, patchy25):
        report = analyze(patchy25)
        for entry in report["series"]:
            assert abs(entry["share_sys"] + entry["share_ran"] - 1.0) < 1e-9

    def test_patchy_effn_and_surrogate_warning(self, patchy25):
        report = analyze(patchy25)
        assert report["effn"] == pytest.approx(8.1, abs=1e-12)
        assert report["m_effn"] == pytest.approx(40.5, abs=1e-12)
        assert report["weighting"]["surrogate_pairs"] == [[1, 2]]
        assert any("surrogate" in w for w in report["warnings"])

    def test_unmatched_effn(self, patchy25):
        report = analyze(all_unmatched(patchy25))
        assert report["effn"] == pytest.approx(10.2, abs=1e-12)
        assert report["weighting"]["surrogate_pairs"] == []

    def test_report_is_self_consistent(self, patchy25):
        # every dataset-level value re-derives from the JSON content alone
        report = json.loads(json.dumps(analyze(patchy25)))
        w = report["weighting"]["w_final"]
        cs = [entry["c"] for entry in report["series"]]
        assert math.fsum(w) == pytest.approx(1.0, abs=1e-9)
        assert report["joint_c"] == pytest.approx(
            math.fsum(wk * ck for wk, ck in zip(w, cs)), abs=1e-12)
        pair = np.asarray(report["weighting"]["effn_pair"])
        m = report["m"]
        iu = np.triu_indices(m, 1)
        assert report["effn"] == pytest.approx(pair[iu].mean(), abs=1e-12)
        for entry in report["series"]:
            pts = entry["points"]
            assert len(pts["case_ids"]) == entry["n"]
            assert len(pts["y_obs"]) == entry["n"]
            # projection reproducible from slope/intercept
            y_p = [entry["intercept"] + entry["slope"] * v
                   for v in pts["y_obs"]]
            assert np.allclose(y_p, pts["y_p"], atol=1e-12)

    def test_non_landmark_scalar_flagged(self, patchy25):
        report = analyze(patchy25, scalar="iqr")
        assert any("non-landmark" in w for w in report["warnings"])

    def test_constant_model_series_has_null_rsq(self, rng):
        y = rng.uniform(0, 10, 8)
        ds = parse_dataset(_single_series_csv(y, np.full(8, y.mean())))
        report = analyze(ds)
        assert report["series"][0]["r_squared"] is None
        assert report["series"][0]["c"] == pytest.approx(9 / 16, abs=1e-12)

    def test_custom_alphas(self, patchy25):
        report = analyze(patchy25, alphas=(0.05,))
        assert [lvl["alpha"] for lvl in report["critical"]["levels"]] == [0.05]

    def test_provenance_echo(self, patchy25):
        report = analyze(patchy25, seed=7, source="x.csv", input_sha256="ab",
                         config_echo={"scalar": "stdev"})
        assert report["provenance"] == {
            "source": "x.csv", "input_sha256": "ab",
            "config": {"scalar": "stdev"}, "seed": 7}


class TestTextRendering:
    def test_text_matches_json_to_printed_precision(self, patchy25):
        report = analyze(patchy25)
        text = render_text(report)
        for entry in report["series"]:
            assert entry["name"] in text
            for key in ("c", "mse_sys", "mse_ran", "mse_tot", "scalar_value"):
                assert f"{entry[key]:.6g}" in text
        assert f"{report['joint_c']:.6g}" in text
        assert f"{report['effn']:.6g}" in text
        for level in report["critical"]["levels"]:
            assert f"{level['critical_c']:.6g}" in text

    def test_text_is_deterministic(self, patchy25):
        a = render_text(analyze(patchy25))
        b = render_text(analyze(patchy25))
        assert a == b


class TestCompare:
    def test_compare_fields(self, patchy25):
        report = compare(restrict(patchy25, 2))
        assert len(report["series"]) == 2
        for entry in report["series"]:
            assert -math.inf < entry["c"] <= 1.0
            assert 0.0 <= entry["residual_regression"]["p_value"] <= 1.0
            assert 0.0 <= entry["wilcoxon"]["p_value"] <= 1.0
            assert entry["mssd"] is None  # no se column in the fixture
        text = render_compare_text(report)
        assert "p_wilcoxon" in text

    def test_compare_with_se(self, rng):
        y = rng.uniform(1, 5, 6)
        lines = ["case,a_obs,a_mod,a_se"]
        for k in range(6):
            lines.append(f"r{k},{float(y[k])!r},{float(y[k] + 0.2)!r},0.1")
        report = compare(parse_dataset("\n".join(lines) + "\n"))
        assert report["series"][0]["mssd"] == pytest.approx(4.0, rel=1e-12)
        assert report["series"][0]["rmssd"] == pytest.approx(2.0, rel=1e-12)
