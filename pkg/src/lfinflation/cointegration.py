"""Residual-based (Engle-Granger style) and Johansen cointegration tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import critical
from .errors import DataError, DegenerateSeriesError, SingularMatrixError
from .series import Period, Series, stack
from .unitroot import UnitRootResult, UnitRootSpec, adf_test, dfgls_test, pp_test

__all__ = [
    "EngleGrangerReport",
    "JohansenRow",
    "JohansenReport",
    "engle_granger",
    "johansen",
]

# reciprocal condition number below which a moment matrix is treated as singular
COND_TOL = 1e-12


@dataclass(frozen=True)
class EngleGrangerReport:
    residual_tests: list[UnitRootResult]
    cointegrated_at_1pct: bool = field(init=False)

    def __post_init__(self):
        by_name = {}
        for r in self.residual_tests:
            by_name.setdefault(r.name, r)
        needed = [by_name.get("ADF"), by_name.get("PP z(rho)"), by_name.get("PP z(t)")]
        ok = all(r is not None and r.reject_at["1%"] for r in needed)
        object.__setattr__(self, "cointegrated_at_1pct", ok)


def engle_granger(
    residual: Series | np.ndarray,
    lags: int = 4,
    deterministic: str = "constant",
    bandwidth: Optional[int] = None,
) -> EngleGrangerReport:
    """Unit-root battery on a model residual (observed minus predicted).

    The residual is taken as given, typically from the cumulative-curve
    calibration rather than a static regression, so plain Dickey-Fuller
    critical values are used. Runs DF, DF-GLS at lags ``lags..1`` and PP.
    ``cointegrated_at_1pct`` requires DF and both PP statistics to reject.
    """
    x = residual.values if isinstance(residual, Series) else np.asarray(residual, dtype=float)
    x = x[~np.isnan(x)]
    if x.size < 15:
        raise DataError(f"residual has {x.size} observations; need at least 15")
    if np.allclose(x, x[0], rtol=0, atol=1e-14):
        raise DegenerateSeriesError("residual has zero variance (perfect fit); no cointegration evidence")
    tests = [adf_test(residual, UnitRootSpec("ADF", deterministic, 0))]
    gls_det = "constant" if deterministic == "none" else deterministic
    for p in range(lags, 0, -1):
        tests.append(dfgls_test(residual, UnitRootSpec("DFGLS", gls_det, p)))
    tests.extend(pp_test(residual, UnitRootSpec("PP", deterministic, bandwidth)))
    return EngleGrangerReport(tests)


@dataclass(frozen=True)
class JohansenRow:
    rank: int
    log_likelihood: float
    eigenvalue: Optional[float]
    trace_stat: Optional[float]
    critical_5pct: Optional[float]


@dataclass(frozen=True)
class JohansenReport:
    trend_spec: str
    max_lag: int
    nobs: int
    eigenvalues: tuple[float, ...]
    rows: tuple[JohansenRow, ...]
    selected_rank: int
    notes: tuple[str, ...] = ()

    @property
    def trace_stats(self) -> tuple[float, ...]:
        return tuple(r.trace_stat for r in self.rows if r.trace_stat is not None)


def _residualize(Z: np.ndarray, W: Optional[np.ndarray]) -> np.ndarray:
    if W is None or W.shape[1] == 0:
        return Z
    coef, *_ = np.linalg.lstsq(W, Z, rcond=None)
    return Z - W @ coef


def _check_conditioning(S: np.ndarray, name: str) -> None:
    d = np.sqrt(np.diag(S))
    if (d <= 0).any():
        raise SingularMatrixError(f"{name} has a zero diagonal entry")
    C = S / np.outer(d, d)
    ev = np.linalg.eigvalsh(C)
    if ev[0] < COND_TOL * ev[-1]:
        raise SingularMatrixError(f"{name} is numerically singular (reciprocal condition {ev[0] / ev[-1]:.2e})")


def _data_matrix(ys) -> np.ndarray:
    if isinstance(ys, np.ndarray):
        Y = np.asarray(ys, dtype=float)
        if Y.ndim != 2:
            raise DataError("expected an (nobs, k) array")
        if np.isnan(Y).any():
            raise DataError("missing values in Johansen input")
        return Y
    if all(isinstance(s, Series) for s in ys):
        _, Y = stack(list(ys))
        return Y
    return np.column_stack([np.asarray(s, dtype=float) for s in ys])


def johansen(ys: Sequence[Series] | np.ndarray, max_lag: int = 2, trend_spec: str = "none") -> JohansenReport:
    """Johansen trace test by reduced-rank regression.

    ``max_lag`` is the lag order of the underlying VAR in levels, so the
    short-run part carries ``max_lag - 1`` lagged differences. ``trend_spec``
    is ``"none"`` (no deterministic terms) or ``"rconstant"`` (a constant
    restricted to the cointegrating space).
    """
    if trend_spec not in ("none", "rconstant"):
        raise ValueError(f"unknown trend_spec {trend_spec!r}")
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    Y = _data_matrix(ys)
    n, K = Y.shape
    if n < 10 + max_lag:
        raise DataError(f"Johansen test needs at least {10 + max_lag} observations, got {n}")

    dY = np.diff(Y, axis=0)
    T = n - max_lag
    Z0 = dY[max_lag - 1 :]
    Z1 = Y[max_lag - 1 : n - 1]
    if trend_spec == "rconstant":
        Z1 = np.column_stack([Z1, np.ones(T)])
    lagged = [dY[max_lag - 1 - j : n - 1 - j] for j in range(1, max_lag)]
    Z2 = np.column_stack(lagged) if lagged else None

    R0 = _residualize(Z0, Z2)
    R1 = _residualize(Z1, Z2)
    S00 = R0.T @ R0 / T
    S01 = R0.T @ R1 / T
    S11 = R1.T @ R1 / T
    _check_conditioning(S00, "S00")
    _check_conditioning(S11, "S11")

    # |lambda S11 - S10 S00^-1 S01| = 0 reduced to a symmetric problem with S11 = L L'
    L = np.linalg.cholesky(S11)
    Linv = np.linalg.solve(L, np.eye(L.shape[0]))
    M = Linv @ S01.T @ np.linalg.solve(S00, S01) @ Linv.T
    M = 0.5 * (M + M.T)
    lam = np.sort(np.linalg.eigvalsh(M))[::-1][:K]
    lam = np.clip(lam, 0.0, 1.0 - 1e-15)

    log1m = np.log1p(-lam)
    _, logdet = np.linalg.slogdet(S00)
    base_ll = -0.5 * T * (K * (1.0 + np.log(2.0 * np.pi)) + logdet)
    rows = []
    selected = K
    for r in range(K + 1):
        ll = base_ll - 0.5 * T * float(log1m[:r].sum())
        ev = float(lam[r - 1]) if r > 0 else None
        if r < K:
            trace = float(-T * log1m[r:].sum())
            cv = critical.johansen_trace_critical(trend_spec, K - r, "5%")
            if selected == K and trace < cv:
                selected = r
        else:
            trace = cv = None
        rows.append(JohansenRow(r, float(ll), ev, trace, cv))
    return JohansenReport(trend_spec, max_lag, T, tuple(float(v) for v in lam), tuple(rows), selected)
