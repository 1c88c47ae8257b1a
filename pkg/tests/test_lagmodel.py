import json
import warnings
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfinflation.errors import ConfigError, DataError, SeriesWarning
from lfinflation.lagmodel import (
    CalibrationConfig,
    GeneralizedModel,
    GeneralizedSegment,
    Grid,
    PiecewiseLagModel,
    Segment,
    calibrate,
    calibrate_generalized,
    dumps_model,
    load_model,
    model_from_dict,
    predict_generalized,
    predict_piecewise,
    save_model,
)
from lfinflation.series import Frequency, Period, Series, growth_rate

from fixtures import annual, labour_force
from oracles import brute_force_fit, brute_force_fit_multi, cumulative_objective

# published post-1991 laws for inflation and unemployment
CPI_POST = Segment(1992, None, 0.5, 0.006, 1)
UE_POST = Segment(1992, None, -0.5, 0.04, 0)
# the two regimes of the generalized law
GEN = GeneralizedModel("LF", "UE", "CPI", (
    GeneralizedSegment(None, 1988, 1.8, -6.0, 0.04, 1, 1),
    GeneralizedSegment(1989, None, 0.4, -0.7, 0.03, 1, 1),
))

# Noisy one-segment recovery: LF = labour_force(50, 2024, 1960), response
# 1966..2008 = 0.5 g(t-1) + 0.006 + 0.002 N(0,1) with seed 7. Fine-grid
# (0.001 x 0.00005) brute-force optimum over lags -1..3:
ORACLE_NOISY = (0.0033926583841570267, 1, 0.516, 0.005)
# Generalized recovery: UE = 0.03 + 0.01 sin(t/4) + 0.003 N (seed 11),
# response 1990..2008 = 0.4 g(t-1) - 0.7 UE(t-1) + 0.03 + 0.002 N (seed 13).
# Fine-grid (0.002, 0.005, 0.0001) optimum:
ORACLE_GEN = (0.0016581818538332939, (0.438, -0.68, 0.0288))


def flat_lf(start=1980, n=30):
    return Series("LF", Frequency.ANNUAL, Period(start), np.full(n, 4.0e6))


def steady_lf(rate, start=1980, n=30):
    return Series("LF", Frequency.ANNUAL, Period(start), 4.0e6 * (1.0 + rate) ** np.arange(n))


def noisy_case():
    lf = labour_force(50, 2024, 1960)
    g = growth_rate(lf)
    years = np.arange(1966, 2009)
    y = 0.5 * g.values[years - 1 - g.start.year] + 0.006 + 0.002 * np.random.default_rng(7).standard_normal(years.size)
    return lf, g, years, y


def generalized_case():
    lf = labour_force(50, 2024, 1960)
    g = growth_rate(lf)
    ue = 0.03 + 0.01 * np.sin(np.arange(50) / 4.0) + 0.003 * np.random.default_rng(11).standard_normal(50)
    yrs = np.arange(1990, 2009)
    gx = g.values[yrs - 1 - g.start.year]
    ux = ue[yrs - 1 - 1960]
    y = 0.4 * gx - 0.7 * ux + 0.03 + 0.002 * np.random.default_rng(13).standard_normal(yrs.size)
    return lf, annual(ue, 1960, "UE"), annual(y, 1990, "CPI"), np.column_stack([gx, ux])


GEN_CFG = CalibrationConfig(lags=(1,), ue_lags=(1,), slope_grid=Grid(-4, 4, 0.01), ue_slope_grid=Grid(-10, 10, 0.1))


# ------------------------------------------------------------ published coefficients

def test_flat_labour_force_gives_intercepts():
    m = PiecewiseLagModel("LF", "CPI", (CPI_POST,))
    assert set(predict_piecewise(m, flat_lf()).values) == {0.006}
    u = PiecewiseLagModel("LF", "UE", (UE_POST,))
    assert set(predict_piecewise(u, flat_lf()).values) == {0.04}


def test_one_percent_more_labour_force_adds_half_a_percent_inflation():
    m = PiecewiseLagModel("LF", "CPI", (CPI_POST,))
    base = predict_piecewise(m, flat_lf()).values
    up = predict_piecewise(m, steady_lf(0.01)).values
    np.testing.assert_allclose(up - base, 0.005, atol=1e-12)


def test_generalized_published_points():
    lf = flat_lf(1980, 20)
    ue0 = annual(np.zeros(20), 1980, "UE")
    pred = predict_generalized(GEN, lf, ue0)
    post = pred.window(1989, None).values
    assert np.all(post == pytest.approx(0.03, abs=1e-15))
    lf1 = steady_lf(0.01, 1980, 20)
    ue1 = annual(np.full(20, 0.005), 1980, "UE")
    pre = predict_generalized(GEN, lf1, ue1).window(None, 1988).values
    np.testing.assert_allclose(pre, 1.8 * 0.01 - 6.0 * 0.005 + 0.04, atol=1e-12)
    assert pre[0] == pytest.approx(0.028, abs=1e-12)


def test_zero_coefficients_give_zero():
    m = GeneralizedModel("LF", "UE", "CPI", (GeneralizedSegment(None, None, 0.0, 0.0, 0.0),))
    out = predict_generalized(m, labour_force(), annual(np.linspace(0.02, 0.05, 42), 1965))
    assert np.all(out.values == 0.0)


def test_zero_slope_gives_constant_intercept():
    m = PiecewiseLagModel("LF", "CPI", (Segment(None, None, 0.0, 0.0123, 2),))
    assert set(predict_piecewise(m, labour_force()).values) == {0.0123}


# ------------------------------------------------------------ prediction mechanics

def test_lag_and_lead_alignment():
    lf = labour_force()
    g = growth_rate(lf)
    lag1 = predict_piecewise(PiecewiseLagModel("LF", "CPI", (Segment(None, None, 1.0, 0.0, 1),)), lf)
    assert lag1.start == g.start.shift(1)
    np.testing.assert_array_equal(lag1.values, g.values)
    lead = predict_piecewise(PiecewiseLagModel("LF", "CPI", (Segment(None, None, 1.0, 0.0, -1),)), lf)
    assert lead.start == g.start.shift(-1)
    np.testing.assert_array_equal(lead.values, g.values)


def test_segment_selected_by_period():
    m = PiecewiseLagModel("LF", "CPI", (Segment(None, 1990, 0.0, 1.0, 0), Segment(1991, None, 0.0, 2.0, 0)))
    out = predict_piecewise(m, flat_lf(1980, 20))
    assert out[1990] == 1.0 and out[1991] == 2.0


def test_gap_between_segments_is_missing_with_warning():
    m = PiecewiseLagModel("LF", "CPI", (Segment(1982, 1985, 0.0, 1.0, 0), Segment(1988, 1990, 0.0, 2.0, 0)))
    with pytest.warns(SeriesWarning, match="1986"):
        out = predict_piecewise(m, flat_lf())
    assert np.isnan(out[1986]) and np.isnan(out[1987])


def test_uncovered_model_is_error():
    m = PiecewiseLagModel("LF", "CPI", (Segment(2050, 2060, 1.0, 0.0, 1),))
    with pytest.raises(DataError), pytest.warns(SeriesWarning):
        predict_piecewise(m, flat_lf())


def test_overlapping_segments_rejected():
    with pytest.raises(ConfigError):
        PiecewiseLagModel("LF", "CPI", (Segment(None, 1990, 1.0, 0.0), Segment(1990, None, 1.0, 0.0)))
    with pytest.raises(ConfigError):
        PiecewiseLagModel("LF", "CPI", ())
    with pytest.raises(ConfigError):
        PiecewiseLagModel("LF", "CPI", (CPI_POST,), driver_transform="log")


@settings(max_examples=50)
@given(st.floats(-5, 5), st.floats(-0.1, 0.1), st.integers(-1, 3), st.floats(-3, 3))
def test_prediction_linear_in_driver(slope, intercept, lag, a):
    g = labour_force().values
    rate = np.diff(g) / g[:-1]
    m = PiecewiseLagModel("g", "y", (Segment(None, None, slope, intercept, lag),), "identity")
    base = predict_piecewise(m, annual(rate, 1966, "g")).values
    scaled = predict_piecewise(m, annual(a * rate, 1966, "g")).values
    np.testing.assert_allclose(scaled - intercept, a * (base - intercept), rtol=0, atol=1e-12)


# ------------------------------------------------------------ calibration

@pytest.mark.parametrize("truth", [(0.5, 0.006, 1), (0.4537, 0.00613, 2), (-0.5, 0.04, 0), (-1.3, 0.011, -1)])
def test_noiseless_recovery(truth):
    slope, icpt, lag = truth
    lf = labour_force(50, 2024, 1960)
    model = PiecewiseLagModel("LF", "CPI", (Segment(None, None, slope, icpt, lag),))
    resp = predict_piecewise(model, lf).window(1966, 2006)
    cal = calibrate(lf, resp)
    seg = cal.model.segments[0]
    assert seg.lag == lag
    assert seg.slope == pytest.approx(slope, abs=1e-9)
    assert seg.intercept == pytest.approx(icpt, abs=1e-9)
    assert cal.objective_value < 1e-9


def test_noisy_recovery_matches_brute_force_oracle():
    lf, g, years, y = noisy_case()
    gv = lambda lag: g.values[years - lag - g.start.year]  # noqa: E731
    cal = calibrate(lf, annual(y, 1966, "CPI"))
    seg, fit = cal.model.segments[0], cal.fits[0]
    assert seg.lag == ORACLE_NOISY[1] == 1
    assert abs(seg.slope - 0.5) <= 0.05 and abs(seg.intercept - 0.006) <= 0.002
    assert abs(seg.slope - ORACLE_NOISY[2]) <= 0.01
    assert abs(seg.intercept - ORACLE_NOISY[3]) <= 0.0005
    # the continuous optimum can only be at least as good as any grid cell
    assert fit.objective <= ORACLE_NOISY[0] + 1e-15
    assert fit.objective == pytest.approx(cumulative_objective(y, gv(1), seg.slope, seg.intercept), rel=1e-12)


def test_noisy_oracle_is_reproducible():
    _, g, years, y = noisy_case()
    lags = (-1, 0, 1, 2, 3)
    yb = {lag: y for lag in lags}
    gb = {lag: g.values[years - lag - g.start.year] for lag in lags}
    val, lag, s, b = brute_force_fit(yb, gb, (0.5, 0.006), (0.1, 0.003), (0.001, 0.00005))
    assert (lag, round(s, 9), round(b, 9)) == ORACLE_NOISY[1:]
    assert val == pytest.approx(ORACLE_NOISY[0], rel=1e-12)


def test_grid_only_matches_brute_force_on_same_grid():
    lf, g, years, y = noisy_case()
    cal = calibrate(lf, annual(y, 1966, "CPI"), CalibrationConfig(refine=False))
    gv = {lag: g.values[years - lag - g.start.year] for lag in (-1, 0, 1, 2, 3)}
    val, lag, s, b = brute_force_fit({k: y for k in gv}, gv, (0.5, 0.006), (0.3, 0.006), (0.01, 0.0005))
    seg = cal.model.segments[0]
    assert (seg.lag, seg.slope, seg.intercept) == pytest.approx((lag, s, b), abs=1e-12)
    assert cal.fits[0].objective == pytest.approx(val, rel=1e-10)


def test_generalized_noiseless_recovery():
    lf = labour_force(50, 2024, 1960)
    ue = annual(0.03 + 0.01 * np.sin(np.arange(50) / 4.0), 1960, "UE")
    resp = predict_generalized(GEN, lf, ue).window(1970, 2008)
    cal = calibrate_generalized(lf, ue, resp, replace(GEN_CFG, breakpoints=(1989,)))
    for got, want in zip(cal.model.segments, GEN.segments):
        assert got.slope_lf == pytest.approx(want.slope_lf, abs=1e-9)
        assert got.slope_ue == pytest.approx(want.slope_ue, abs=1e-9)
        assert got.intercept == pytest.approx(want.intercept, abs=1e-9)
    assert cal.objective_value < 1e-9


def test_generalized_noisy_recovery_matches_oracle():
    lf, ue, resp, X = generalized_case()
    cal = calibrate_generalized(lf, ue, resp, GEN_CFG)
    seg = cal.model.segments[0]
    got = (seg.slope_lf, seg.slope_ue, seg.intercept)
    for a, b, step in zip(got, ORACLE_GEN[1], (0.01, 0.1, 0.0005)):
        assert abs(a - b) <= step
    assert cal.fits[0].objective <= ORACLE_GEN[0] + 1e-15


def test_generalized_oracle_is_reproducible():
    _, _, resp, X = generalized_case()
    val, coef = brute_force_fit_multi(resp.values, X, (0.4, -0.7, 0.03), (0.2, 0.5, 0.01), (0.002, 0.005, 0.0001))
    np.testing.assert_allclose(coef, ORACLE_GEN[1], atol=1e-12)
    assert val == pytest.approx(ORACLE_GEN[0], rel=1e-12)


def test_breakpoints_split_segments():
    lf = labour_force(50, 2024, 1960)
    law = PiecewiseLagModel("LF", "CPI", (Segment(None, 1984, 1.3, 0.008, 1), Segment(1985, None, 0.5, 0.006, 1)))
    resp = predict_piecewise(law, lf).window(1966, 2008)
    cal = calibrate(lf, resp, CalibrationConfig(breakpoints=(1985,)))
    a, b = cal.model.segments
    assert a.start is None and a.end == Period(1984) and b.start == Period(1985) and b.end is None
    assert (a.slope, a.intercept, b.slope, b.intercept) == pytest.approx((1.3, 0.008, 0.5, 0.006), abs=1e-9)
    r = cal.residual
    assert r.start == Period(1966) and r.end == Period(2008)
    assert np.nanmax(np.abs(r.values)) < 1e-9


def test_fixed_slope_is_held():
    lf, _, _, y = noisy_case()
    cal = calibrate(lf, annual(y, 1966, "CPI"), CalibrationConfig(fixed_slopes={0: 0.3}))
    assert cal.model.segments[0].slope == 0.3


def test_annual_objective_is_least_squares_on_grid_box():
    lf, g, years, y = noisy_case()
    cal = calibrate(lf, annual(y, 1966, "CPI"), CalibrationConfig(objective="annual_rms", lags=(1,)))
    X = np.column_stack([g.values[years - 1 - g.start.year], np.ones(years.size)])
    ls = np.linalg.lstsq(X, y, rcond=None)[0]
    seg = cal.model.segments[0]
    assert (seg.slope, seg.intercept) == pytest.approx(tuple(ls), abs=1e-7)


def test_ties_prefer_small_lag_then_small_slope():
    # a zero driver makes every lag and slope equally good
    zero = annual(np.zeros(40), 1960, "g")
    resp = annual(np.full(30, 0.01), 1965, "y")
    cal = calibrate(zero, resp, CalibrationConfig(driver_transform="identity", refine=False))
    seg = cal.model.segments[0]
    assert (seg.lag, seg.slope, seg.intercept) == (0, 0.0, 0.01)


def test_refinement_stays_in_grid_box():
    lf, _, _, y = noisy_case()
    cfg = CalibrationConfig(slope_grid=Grid(0.0, 0.3, 0.01))
    seg = calibrate(lf, annual(y, 1966, "CPI"), cfg).model.segments[0]
    assert 0.0 <= seg.slope <= 0.3


def test_lag_profile_and_diagnostics():
    lf, _, _, y = noisy_case()
    fit = calibrate(lf, annual(y, 1966, "CPI")).fits[0]
    assert set(fit.lag_profile) == {-1, 0, 1, 2, 3}
    assert min(fit.lag_profile.values()) == fit.objective
    assert fit.nobs == 43
    assert fit.annual_rms > 0 and fit.cumulative_rms == pytest.approx(fit.objective, rel=1e-12)


def test_calibration_errors():
    lf = labour_force(50, 2024, 1960)
    resp = annual(np.full(20, 0.01), 1980, "y")
    with pytest.raises(DataError):
        calibrate(lf, resp, CalibrationConfig(breakpoints=(1983,)))
    with pytest.raises(ConfigError):
        calibrate(lf, resp, CalibrationConfig(breakpoints=(2030,)))
    with pytest.raises(ConfigError):
        CalibrationConfig(slope_grid=Grid(0.001, 0.002, 0.01))
    with pytest.raises(ConfigError):
        Grid(1.0, 0.0, 0.1)
    with pytest.raises(ConfigError):
        CalibrationConfig(lags=())
    with pytest.raises(ConfigError):
        CalibrationConfig(objective="mae")
    q = Series("q", Frequency.QUARTERLY, Period(1980, 1), np.ones(40))
    with pytest.raises(DataError):
        calibrate(q, resp)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 1000), st.floats(-2, 2), st.floats(-0.02, 0.02), st.floats(0.0, 0.02))
def test_refine_never_worse_than_grid(seed, slope, icpt, noise):
    lf = labour_force(40, seed, 1960)
    g = growth_rate(lf)
    years = np.arange(1965, 1995)
    y = slope * g.values[years - 1 - g.start.year] + icpt + noise * np.random.default_rng(seed).standard_normal(30)
    resp = annual(y, 1965)
    cfg = CalibrationConfig(lags=(0, 1), slope_grid=Grid(-3, 3, 0.05), intercept_grid=Grid(-0.05, 0.05, 0.001))
    fit = calibrate(lf, resp, cfg).fits[0]
    grid_only = calibrate(lf, resp, replace(cfg, refine=False)).fits[0]
    assert fit.objective <= grid_only.objective
    assert fit.grid_objective == grid_only.objective


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 1000))
def test_calibration_is_deterministic(seed):
    lf = labour_force(40, seed, 1960)
    resp = annual(0.01 + 0.01 * np.random.default_rng(seed).standard_normal(30), 1965)
    cfg = CalibrationConfig(lags=(0, 1), slope_grid=Grid(-2, 2, 0.05))
    assert dumps_model(calibrate(lf, resp, cfg).model) == dumps_model(calibrate(lf, resp, cfg).model)


# ------------------------------------------------------------ model files

def test_model_file_round_trip(tmp_path):
    for m in (PiecewiseLagModel("LF", "CPI", (Segment(None, 1991, 1.3, 0.008, 1), CPI_POST)), GEN):
        p = tmp_path / "m.json"
        save_model(m, p)
        assert load_model(p) == m
        assert dumps_model(model_from_dict(json.loads(dumps_model(m)))) == dumps_model(m)


@given(st.floats(-10, 10), st.floats(-1, 1), st.integers(-3, 5))
def test_round_trip_is_exact_for_any_float(slope, icpt, lag):
    m = PiecewiseLagModel("a", "b", (Segment(None, None, slope, icpt, lag),))
    assert model_from_dict(json.loads(dumps_model(m))) == m


def test_bad_model_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_model(p)
    p.write_text(json.dumps({"format": "other"}))
    with pytest.raises(ConfigError):
        load_model(p)
    p.write_text(json.dumps({"format": "lfinflation-model", "version": 99}))
    with pytest.raises(ConfigError):
        load_model(p)
    with pytest.raises(ConfigError):
        model_from_dict({"kind": "spline"})


def test_warning_free_prediction_on_full_coverage():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        predict_piecewise(PiecewiseLagModel("LF", "CPI", (CPI_POST,)), labour_force(), "p")
