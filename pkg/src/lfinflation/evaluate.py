"""Goodness-of-fit and forecast-accuracy metrics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DataError, DegenerateSeriesError
from .series import Period, Series, align, cumulative, moving_average

__all__ = [
    "EvaluationReport",
    "r_squared",
    "rmsfe",
    "naive_rmsfe",
    "relative_cumulative_error",
    "evaluate",
    "PRESETS",
]

PRESETS = ("annual", "ma3")


def r_squared(obs: Series, pred: Series) -> float:
    """``1 - SSR/SST`` over the jointly observed span; not clamped at zero."""
    a = align(obs, pred)
    if len(a) < 3:
        raise DataError(f"r_squared needs at least 3 overlapping points, got {len(a)}")
    sst = float(np.sum((a.a - a.a.mean()) ** 2))
    if sst <= 0.0:
        raise DegenerateSeriesError(f"{obs.id!r} has zero variance over the evaluated span")
    ssr = float(np.sum((a.a - a.b) ** 2))
    return 1.0 - ssr / sst


def rmsfe(obs: Series, pred: Series) -> float:
    a = align(obs, pred)
    d = a.a - a.b
    return float(np.sqrt(np.mean(d * d)))


def naive_rmsfe(s: Series, horizon: int = 1) -> float:
    """RMS error of predicting ``x_t`` by ``x_{t-horizon}``."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if len(s) < horizon + 1:
        raise DataError(f"series {s.id!r} too short for horizon {horizon}")
    d = s.values[horizon:] - s.values[:-horizon]
    d = d[~np.isnan(d)]
    if d.size == 0:
        raise DataError(f"no complete pairs in {s.id!r} at horizon {horizon}")
    return float(np.sqrt(np.mean(d * d)))


def relative_cumulative_error(obs: Series, pred: Series, base=None) -> Series:
    """``(cum(obs) - cum(pred)) / cum(obs)`` with running sums from ``base``.

    Both series are summed over their common span starting at ``base``
    (default: the first common period). Where the observed running sum is
    zero the output is missing.
    """
    lo = max(obs.start.ordinal, pred.start.ordinal)
    hi = min(obs.end.ordinal, pred.end.ordinal)
    if base is not None:
        lo = max(lo, Period.parse(base).ordinal)
    if hi < lo:
        raise DataError(f"{obs.id!r} and {pred.id!r} have no common span from {base}")
    start = Period.from_ordinal(lo, obs.frequency)
    end = Period.from_ordinal(hi, obs.frequency)
    co = cumulative(obs.window(start, end)).values
    cp = cumulative(pred.window(start, end)).values
    out = np.full(co.shape, np.nan)
    nz = co != 0
    out[nz] = (co[nz] - cp[nz]) / co[nz]
    return Series(f"relerr({obs.id})", obs.frequency, start, out, "fraction")


@dataclass(frozen=True)
class EvaluationReport:
    preset: str
    r2_annual: float
    r2_cumulative: float
    rmsfe: float
    naive_rmsfe: float
    relative_cumulative_error: Series
    span: tuple[Period, Period]
    nobs: int

    def to_dict(self) -> dict:
        return {
            "preset": self.preset,
            "span_start": str(self.span[0]),
            "span_end": str(self.span[1]),
            "nobs": self.nobs,
            "r2_annual": self.r2_annual,
            "r2_cumulative": self.r2_cumulative,
            "rmsfe": self.rmsfe,
            "naive_rmsfe": self.naive_rmsfe,
        }


def evaluate(obs: Series, pred: Series, preset: str = "annual", start=None, end=None) -> EvaluationReport:
    """Score a prediction against observations over ``[start, end]``.

    ``preset="ma3"`` compares a trailing 3-period mean of the prediction with
    the raw observations; the naive benchmark always uses the raw observed
    series. Cumulative quantities run from the first evaluated period.
    """
    if preset not in PRESETS:
        raise ValueError(f"unknown evaluation preset {preset!r}")
    if preset == "ma3":
        pred = moving_average(pred, 3)
    obs_w = obs.window(start, end)
    pred_w = pred.window(start, end)
    a = align(obs_w, pred_w)
    span = (a.periods[0], a.periods[-1])
    obs_w = obs_w.window(*span)
    pred_w = pred_w.window(*span)
    cum_o = cumulative(obs_w)
    cum_p = cumulative(pred_w)
    return EvaluationReport(
        preset,
        r_squared(obs_w, pred_w),
        r_squared(cum_o, cum_p),
        rmsfe(obs_w, pred_w),
        naive_rmsfe(obs_w),
        relative_cumulative_error(obs_w, pred_w),
        span,
        len(a),
    )
