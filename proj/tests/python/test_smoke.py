import math

import pytest

import hookfit


def test_zeta_identity():
    d = hookfit.Distribution("pl", alpha=2.0)
    assert abs(d.normalization_constant - math.pi**2 / 6) < 1e-3
    assert abs(d.pmf(1) - 6 / math.pi**2) < 1e-6
    assert d.ccdf(1) == 1.0


def test_sample_is_deterministic():
    d = hookfit.Distribution("hooked", x_min=2, alpha=3.0, B=10.0)
    a = d.sample(50, seed=7)
    assert a == d.sample(50, seed=7)
    assert len(a) == 50 and min(a) >= 2


def test_fit_and_compare():
    counts = hookfit.Distribution("ln", mu=2.0, sigma=1.0).sample(2000, seed=3)
    f = hookfit.fit(counts, "ln")
    assert f["distribution"]["kind"] == "ln"
    assert abs(f["distribution"]["mu"] - 2.0) < 0.2
    assert f["converged"]
    v = hookfit.compare(counts, "pl", "ln")
    assert v["test"] == "vuong" and v["statistic"] < -1.96
    lrt = hookfit.compare(counts, "pl", "hooked")
    assert lrt["test"] == "lrt" and lrt["statistic"] >= 0


def test_analyze_row():
    counts = hookfit.Distribution("hooked", alpha=3.0, B=20.0).sample(1000, seed=1)
    row = hookfit.analyze(counts, x_min="all", label="s")
    assert row["subject"] == "s"
    assert row["ll_hooked"] <= row["ll_pl"] + 1e-6


def test_closed_forms():
    assert hookfit.slope_tolerance_threshold(0.1, 55.0) == 495.0
    alpha, B = hookfit.attachment_to_hooked(0.5, 1.0)
    assert (alpha, B) == pytest.approx((3.0, 2.0))
    beta, m = hookfit.hooked_to_attachment(5.0, 18.0)
    assert (beta, m) == pytest.approx((0.25, 3.0))


def test_errors_map_to_python_exceptions():
    with pytest.raises(hookfit.ParameterError):
        hookfit.hooked_to_attachment(2.0, 5.0)
    with pytest.raises(hookfit.DegenerateDataError):
        hookfit.fit([4, 4, 4, 4], "pl")
    with pytest.raises(hookfit.HookfitError):
        hookfit.Distribution("pl", alpha=0.5)
    with pytest.raises(hookfit.UsageError):
        hookfit.fit([1, 2, 3], "yule")


def test_small_ci_study():
    grid = hookfit.ci_width_study("hooked", [2.0, 3.0], [200], replicates=10, seed=5)
    assert len(grid["cells"]) == 2
    assert all(c["width"] >= 0 for c in grid["cells"])
