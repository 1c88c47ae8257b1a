"""Embedded critical-value tables.

* ``TAU_MACKINNON``: MacKinnon (2010) response surfaces for the
  Dickey-Fuller t statistic with one variable,
  ``cv(T) = b0 + b1/T + b2/T**2 + b3/T**3``.
* ``TAU_FULLER`` / ``RHO_FULLER``: Fuller (1976) tables for the t and
  normalised-bias ``T(rho - 1)`` statistics, linearly interpolated in the
  sample size. These are the values most packaged DF and PP routines print.
* ``DFGLS_TREND``: Elliott, Rothenberg and Stock (1996) finite-sample values
  for the GLS-detrended (linear trend) case. The constant-only DF-GLS test
  uses the no-deterministic Dickey-Fuller distribution.
* ``JOHANSEN_TRACE``: Osterwald-Lenum (1992) trace-test quantiles indexed
  by the number of non-cointegrated directions ``K - r``.
"""

from __future__ import annotations

import numpy as np

LEVELS = ("1%", "5%", "10%")

TAU_MACKINNON = {
    "none": {
        "1%": (-2.56574, -2.2358, -3.627, 0.0),
        "5%": (-1.94100, -0.2686, -3.365, 31.223),
        "10%": (-1.61682, 0.2656, -2.714, 25.364),
    },
    "constant": {
        "1%": (-3.43035, -6.5393, -16.786, -79.433),
        "5%": (-2.86154, -2.8903, -4.234, -40.040),
        "10%": (-2.56677, -1.5384, -2.809, 0.0),
    },
    "constant_and_trend": {
        "1%": (-3.95877, -9.0531, -28.428, -134.155),
        "5%": (-3.41049, -4.3904, -9.036, -45.374),
        "10%": (-3.12705, -2.5856, -3.925, -22.380),
    },
}

_FULLER_N = (25, 50, 100, 250, 500)

TAU_FULLER = {
    "none": {
        "1%": (-2.66, -2.62, -2.60, -2.58, -2.58),
        "5%": (-1.95, -1.95, -1.95, -1.95, -1.95),
        "10%": (-1.60, -1.61, -1.61, -1.62, -1.62),
    },
    "constant": {
        "1%": (-3.75, -3.58, -3.51, -3.46, -3.44),
        "5%": (-3.00, -2.93, -2.89, -2.88, -2.87),
        "10%": (-2.63, -2.60, -2.58, -2.57, -2.57),
    },
    "constant_and_trend": {
        "1%": (-4.38, -4.15, -4.04, -3.99, -3.98),
        "5%": (-3.60, -3.50, -3.45, -3.43, -3.42),
        "10%": (-3.24, -3.18, -3.15, -3.13, -3.13),
    },
}

RHO_FULLER = {
    "none": {
        "1%": (-11.9, -12.9, -13.3, -13.6, -13.7),
        "5%": (-7.3, -7.7, -7.9, -8.0, -8.0),
        "10%": (-5.3, -5.5, -5.6, -5.7, -5.7),
    },
    "constant": {
        "1%": (-17.2, -18.9, -19.8, -20.3, -20.5),
        "5%": (-12.5, -13.3, -13.7, -14.0, -14.0),
        "10%": (-10.2, -10.7, -11.0, -11.2, -11.2),
    },
    "constant_and_trend": {
        "1%": (-22.5, -25.7, -27.4, -28.4, -28.9),
        "5%": (-17.9, -19.8, -20.7, -21.3, -21.5),
        "10%": (-15.6, -16.8, -17.5, -18.0, -18.1),
    },
}

_ERS_N = (50, 100, 200)
DFGLS_TREND = {
    "1%": (-3.77, -3.58, -3.46),
    "5%": (-3.19, -3.03, -2.93),
    "10%": (-2.89, -2.74, -2.64),
}

# K - r -> (10%, 5%, 1%)
JOHANSEN_TRACE = {
    "none": {
        1: (2.86, 3.84, 6.51),
        2: (10.47, 12.53, 16.31),
        3: (21.63, 24.31, 29.75),
        4: (36.58, 39.89, 45.58),
        5: (55.44, 59.46, 66.52),
    },
    "rconstant": {
        1: (7.52, 9.24, 12.97),
        2: (17.85, 19.96, 24.60),
        3: (32.00, 34.91, 41.07),
        4: (49.65, 53.12, 60.16),
        5: (71.86, 76.07, 84.45),
    },
}


def _interp(n: int, grid, values) -> float:
    return float(np.interp(n, grid, values))


def tau_critical(deterministic: str, nobs: int, table: str = "mackinnon") -> dict[str, float]:
    if table == "mackinnon":
        coefs = TAU_MACKINNON[deterministic]
        return {lv: float(np.polyval(coefs[lv][::-1], 1.0 / nobs)) for lv in LEVELS}
    if table == "fuller":
        return {lv: _interp(nobs, _FULLER_N, TAU_FULLER[deterministic][lv]) for lv in LEVELS}
    raise ValueError(f"unknown critical-value table {table!r}")


def rho_critical(deterministic: str, nobs: int) -> dict[str, float]:
    return {lv: _interp(nobs, _FULLER_N, RHO_FULLER[deterministic][lv]) for lv in LEVELS}


def dfgls_critical(deterministic: str, nobs: int, table: str = "mackinnon") -> dict[str, float]:
    if deterministic == "constant":
        return tau_critical("none", nobs, table)
    if deterministic == "constant_and_trend":
        return {lv: _interp(nobs, _ERS_N, DFGLS_TREND[lv]) for lv in LEVELS}
    raise ValueError(f"DF-GLS needs a constant or a trend, got {deterministic!r}")


def johansen_trace_critical(trend_spec: str, k_minus_r: int, level: str = "5%") -> float:
    try:
        row = JOHANSEN_TRACE[trend_spec][k_minus_r]
    except KeyError:
        raise ValueError(f"no trace critical value for {trend_spec!r} with K-r={k_minus_r}") from None
    return row[{"10%": 0, "5%": 1, "1%": 2}[level]]
