"""Augmented Dickey-Fuller, DF-GLS and Phillips-Perron unit-root tests.

All three are left-tailed: the unit-root null is rejected at level ``a``
when the statistic is below the critical value for ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import critical
from .errors import DataError, DegenerateSeriesError
from .regress import default_bandwidth, long_run_variance, ols
from .series import Frequency, Series

__all__ = [
    "UnitRootSpec",
    "UnitRootResult",
    "PPResult",
    "adf_test",
    "dfgls_test",
    "pp_test",
    "run_test",
    "default_lags",
]

DETERMINISTIC = ("none", "constant", "constant_and_trend")

ArrayOrSeries = Union[Series, np.ndarray, list]


@dataclass(frozen=True)
class UnitRootSpec:
    """``lags`` is the augmentation order for ADF/DF-GLS and the Newey-West
    bandwidth for PP; ``None`` picks the package default."""

    test: str = "ADF"
    deterministic: str = "constant"
    lags: Optional[int] = None
    table: str = "mackinnon"

    def __post_init__(self):
        object.__setattr__(self, "test", self.test.upper().replace("-", ""))
        if self.test not in ("ADF", "DFGLS", "PP"):
            raise ValueError(f"unknown unit-root test {self.test!r}")
        if self.deterministic not in DETERMINISTIC:
            raise ValueError(f"unknown deterministic specification {self.deterministic!r}")
        if self.lags is not None and self.lags < 0:
            raise ValueError("lags must be >= 0")


@dataclass(frozen=True)
class UnitRootResult:
    name: str
    statistic: float
    critical_values: dict
    nobs: int
    lags: int
    deterministic: str
    reject_at: dict = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "reject_at", {lv: bool(self.statistic < cv) for lv, cv in self.critical_values.items()}
        )


@dataclass(frozen=True)
class PPResult:
    z_rho: UnitRootResult
    z_tau: UnitRootResult
    bandwidth: int

    def __iter__(self):
        return iter((self.z_rho, self.z_tau))


def default_lags(test: str, frequency: Frequency = Frequency.ANNUAL) -> Optional[int]:
    """Augmentation defaults: plain DF for ADF, 2 (annual) / 4 (quarterly) for DF-GLS."""
    test = test.upper().replace("-", "")
    if test == "ADF":
        return 0
    if test == "DFGLS":
        return 2 if Frequency(frequency) is Frequency.ANNUAL else 4
    return None


def _values(s: ArrayOrSeries, name: str = "series") -> np.ndarray:
    if isinstance(s, Series):
        x = s.values
        name = s.id
    else:
        x = np.asarray(s, dtype=float).reshape(-1)
    ok = np.flatnonzero(~np.isnan(x))
    if ok.size == 0:
        raise DataError(f"{name} has no observations")
    x = x[ok[0] : ok[-1] + 1]
    if np.isnan(x).any():
        raise DataError(f"{name} has missing values inside its span; unit-root tests need consecutive data")
    if np.ptp(x) <= 1e-14 * max(1.0, float(np.abs(x).max())):
        raise DegenerateSeriesError(f"{name} is constant; the test statistic is undefined")
    return x


def _deterministic_columns(kind: str, nobs: int) -> list[np.ndarray]:
    cols = []
    if kind in ("constant", "constant_and_trend"):
        cols.append(np.ones(nobs))
    if kind == "constant_and_trend":
        cols.append(np.arange(1.0, nobs + 1.0))
    return cols


def _df_regression(x: np.ndarray, lags: int, deterministic: str):
    """Regress dx_t on x_{t-1}, lagged dx and deterministic terms; x_{t-1} is column 0."""
    dx = np.diff(x)
    n = dx.size
    y = dx[lags:]
    nobs = y.size
    cols = [x[lags:-1]]
    for j in range(1, lags + 1):
        cols.append(dx[lags - j : n - j])
    cols.extend(_deterministic_columns(deterministic, nobs))
    return ols(y, np.column_stack(cols))


def _check_length(x: np.ndarray, lags: int, name: str) -> None:
    if x.size < lags + 10:
        raise DataError(f"{name}: {x.size} observations is too short for {lags} lags (need {lags + 10})")


def adf_test(s: ArrayOrSeries, spec: UnitRootSpec = UnitRootSpec()) -> UnitRootResult:
    """Augmented Dickey-Fuller t test on the coefficient of ``x_{t-1}``."""
    x = _values(s)
    freq = s.frequency if isinstance(s, Series) else Frequency.ANNUAL
    lags = default_lags("ADF", freq) if spec.lags is None else spec.lags
    _check_length(x, lags, "ADF")
    fit = _df_regression(x, lags, spec.deterministic)
    cv = critical.tau_critical(spec.deterministic, fit.nobs, spec.table)
    return UnitRootResult("ADF", float(fit.t_stats[0]), cv, fit.nobs, lags, spec.deterministic)


def gls_detrend(x: np.ndarray, deterministic: str) -> np.ndarray:
    """Local-to-unity GLS detrending with c = -7 (constant) or -13.5 (trend)."""
    n = x.size
    cbar = -7.0 if deterministic == "constant" else -13.5
    alpha = 1.0 + cbar / n
    z = np.column_stack(_deterministic_columns(deterministic, n))
    xq = np.concatenate([x[:1], x[1:] - alpha * x[:-1]])
    zq = np.vstack([z[:1], z[1:] - alpha * z[:-1]])
    beta = ols(xq, zq).coefficients
    return x - z @ beta


def dfgls_test(s: ArrayOrSeries, spec: UnitRootSpec = UnitRootSpec(test="DFGLS")) -> UnitRootResult:
    """Elliott-Rothenberg-Stock DF-GLS test."""
    if spec.deterministic == "none":
        raise ValueError("DF-GLS requires a constant or constant_and_trend specification")
    x = _values(s)
    freq = s.frequency if isinstance(s, Series) else Frequency.ANNUAL
    lags = default_lags("DFGLS", freq) if spec.lags is None else spec.lags
    _check_length(x, lags, "DF-GLS")
    xd = gls_detrend(x, spec.deterministic)
    fit = _df_regression(xd, lags, "none")
    cv = critical.dfgls_critical(spec.deterministic, fit.nobs, spec.table)
    return UnitRootResult("DF-GLS", float(fit.t_stats[0]), cv, fit.nobs, lags, spec.deterministic)


def pp_test(s: ArrayOrSeries, spec: UnitRootSpec = UnitRootSpec(test="PP")) -> PPResult:
    """Phillips-Perron ``Z(rho)`` and ``Z(tau)`` statistics.

    The non-augmented DF regression is corrected for serial correlation with
    the Newey-West long-run variance of its residuals.
    """
    x = _values(s)
    if x.size < 15:
        raise DataError(f"PP: {x.size} observations is too short (need 15)")
    fit = _df_regression(x, 0, spec.deterministic)
    T = fit.nobs
    q = default_bandwidth(T) if spec.lags is None else spec.lags
    u = fit.residuals
    s2 = fit.sigma2
    gamma0 = fit.rss / T
    lam2 = long_run_variance(u, q)
    if lam2 <= 0 or s2 <= 0:
        raise DegenerateSeriesError("PP: zero residual variance")
    sigma = fit.standard_errors[0]
    rho_m1 = fit.coefficients[0]
    z_rho = T * rho_m1 - 0.5 * (T**2 * sigma**2 / s2) * (lam2 - gamma0)
    z_tau = np.sqrt(gamma0 / lam2) * fit.t_stats[0] - 0.5 * ((lam2 - gamma0) / np.sqrt(lam2)) * (
        T * sigma / np.sqrt(s2)
    )
    det = spec.deterministic
    return PPResult(
        UnitRootResult("PP z(rho)", float(z_rho), critical.rho_critical(det, T), T, q, det),
        UnitRootResult("PP z(t)", float(z_tau), critical.tau_critical(det, T, spec.table), T, q, det),
        q,
    )


def run_test(s: ArrayOrSeries, spec: UnitRootSpec) -> list[UnitRootResult]:
    """Dispatch on ``spec.test``; always returns a list (two entries for PP)."""
    if spec.test == "ADF":
        return [adf_test(s, spec)]
    if spec.test == "DFGLS":
        return [dfgls_test(s, spec)]
    return list(pp_test(s, spec))
