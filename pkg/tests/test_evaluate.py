from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from lfinflation.errors import DataError, DegenerateSeriesError
from lfinflation.evaluate import evaluate, naive_rmsfe, r_squared, relative_cumulative_error, rmsfe
from lfinflation.series import Period, cumulative, lag_shift, moving_average

from fixtures import annual

# five-point hand calculation: differences 0.03, -0.04, 0.03, 0.00 give
# mean square 34/40000, so the naive RMSFE is sqrt(17/20000)
NAIVE5 = [0.02, 0.05, 0.01, 0.04, 0.04]
NAIVE5_RMSFE = 0.0291547594742265


def test_naive_frozen_value_matches_rational_oracle():
    d = [Fraction(str(b)) - Fraction(str(a)) for a, b in zip(NAIVE5, NAIVE5[1:])]
    ms = sum(v * v for v in d) / len(d)
    assert ms == Fraction(17, 20000)
    assert math.sqrt(ms) == pytest.approx(NAIVE5_RMSFE, abs=1e-16)


def test_naive_rmsfe_hand_value():
    assert naive_rmsfe(annual(NAIVE5, 1972)) == pytest.approx(NAIVE5_RMSFE, abs=1e-12)
    assert naive_rmsfe(annual([0.0, 0.02, 0.0], 1972)) == pytest.approx(0.02, abs=1e-15)
    assert naive_rmsfe(annual([0.3] * 6, 1972)) == 0.0
    assert naive_rmsfe(annual([1.0, 2.0, 4.0, 7.0], 1972), horizon=2) == pytest.approx(np.sqrt((9 + 25) / 2))


def test_naive_rmsfe_errors():
    with pytest.raises(DataError):
        naive_rmsfe(annual([1.0], 1972))
    with pytest.raises(ValueError):
        naive_rmsfe(annual([1.0, 2.0], 1972), horizon=0)


def test_rmsfe_identities():
    obs = annual([0.01, 0.03, 0.02, 0.05], 1990)
    assert rmsfe(obs, obs) == 0.0
    assert rmsfe(annual([0.01, -0.01], 1990), annual([0.0, 0.0], 1990)) == pytest.approx(0.01, abs=1e-15)
    with pytest.raises(DataError):
        rmsfe(obs, annual([0.0], 2020))


def test_r_squared_identities():
    obs = annual([0.01, 0.03, 0.02, 0.05], 1990)
    assert r_squared(obs, obs) == 1.0
    assert r_squared(obs, annual([obs.values.mean()] * 4, 1990)) == pytest.approx(0.0, abs=1e-12)
    assert r_squared(obs, annual([0.05, 0.0, 0.06, -0.02], 1990)) < 0
    with pytest.raises(DegenerateSeriesError):
        r_squared(annual([0.02] * 4, 1990), obs)
    with pytest.raises(DataError):
        r_squared(obs.window(1990, 1991), obs)


def test_relative_cumulative_error_examples():
    obs = annual([0.01, 0.03, 0.02, 0.05], 1990)
    assert np.all(relative_cumulative_error(obs, obs).values == 0.0)
    rel = relative_cumulative_error(annual([0.01] * 6, 1990), annual([0.02] * 6, 1990))
    np.testing.assert_allclose(rel.values, -1.0, rtol=0, atol=1e-15)
    based = relative_cumulative_error(obs, obs, base=1992)
    assert based.start == Period(1992) and len(based) == 2


def test_relative_cumulative_error_zero_observed_sum_is_missing():
    rel = relative_cumulative_error(annual([0.01, -0.01, 0.02], 1990), annual([0.0, 0.0, 0.0], 1990))
    assert rel.values[0] == 1.0 and np.isnan(rel.values[1]) and rel.values[2] == 1.0
    with pytest.raises(DataError):
        relative_cumulative_error(annual([0.01], 1990), annual([0.01], 1990), base=1995)


def test_evaluate_report():
    rng = np.random.default_rng(0)
    obs = annual(0.02 + 0.01 * rng.standard_normal(30), 1975)
    pred = annual(obs.values + 0.004 * rng.standard_normal(30), 1975)
    rep = evaluate(obs, pred, start=1980, end=2000)
    assert rep.span == (Period(1980), Period(2000)) and rep.nobs == 21
    assert rep.r2_annual == r_squared(obs.window(1980, 2000), pred)
    assert rep.rmsfe == rmsfe(obs.window(1980, 2000), pred)
    assert rep.naive_rmsfe == naive_rmsfe(obs.window(1980, 2000))
    assert rep.r2_cumulative == r_squared(cumulative(obs.window(1980, 2000)), cumulative(pred.window(1980, 2000)))
    assert rep.relative_cumulative_error.start == Period(1980)
    assert rep.rmsfe >= 0 and rep.naive_rmsfe >= 0 and rep.r2_annual <= 1 and rep.r2_cumulative <= 1
    assert set(rep.to_dict()) >= {"r2_annual", "r2_cumulative", "rmsfe", "naive_rmsfe", "span_start"}


def test_evaluate_ma3_smooths_prediction_only():
    rng = np.random.default_rng(1)
    obs = annual(0.02 + 0.01 * rng.standard_normal(20), 1980)
    pred = annual(0.02 + 0.01 * rng.standard_normal(20), 1980)
    rep = evaluate(obs, pred, "ma3")
    sm = moving_average(pred, 3)
    assert rep.span[0] == Period(1982)
    assert rep.rmsfe == rmsfe(obs, sm)
    assert rep.naive_rmsfe == naive_rmsfe(obs.window(1982, None))
    with pytest.raises(ValueError):
        evaluate(obs, pred, "ma8")


# ----------------------------------------------------------------- properties

vals = st.lists(st.floats(-0.1, 0.1), min_size=4, max_size=30)


@given(vals, st.integers(0, 2**32 - 1))
def test_rmsfe_symmetric(v, seed):
    other = np.asarray(v) + np.random.default_rng(seed).normal(0, 0.01, len(v))
    a, b = annual(v, 1970), annual(other, 1970)
    assert rmsfe(a, b) == rmsfe(b, a)


@settings(max_examples=80)
@given(vals, st.integers(0, 2**32 - 1), st.floats(0.1, 100), st.floats(-10, 10))
def test_r_squared_affine_invariant(v, seed, a, b):
    obs = np.asarray(v)
    assume(np.ptp(obs) > 1e-3)
    pred = obs + np.random.default_rng(seed).normal(0, 0.02, obs.size)
    base = r_squared(annual(obs, 1970), annual(pred, 1970))
    moved = r_squared(annual(a * obs + b, 1970), annual(a * pred + b, 1970))
    assert moved == pytest.approx(base, abs=1e-9 * max(1.0, abs(base)))


@given(st.lists(st.floats(-0.1, 0.1), min_size=2, max_size=30))
def test_naive_equals_rmsfe_of_shifted_series(v):
    s = annual(v, 1970)
    assert naive_rmsfe(s) == pytest.approx(rmsfe(s, lag_shift(s, 1)), rel=1e-12, abs=1e-15)
