"""Least squares and long-run variance kernels shared by the test statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, RankDeficientError

__all__ = ["OlsFit", "ols", "long_run_variance", "default_bandwidth"]

# relative threshold on |R_jj| of the column-normalised QR factor
RANK_TOL = 1e-10


@dataclass(frozen=True)
class OlsFit:
    coefficients: np.ndarray
    standard_errors: np.ndarray
    t_stats: np.ndarray
    residuals: np.ndarray
    rss: float
    nobs: int

    @property
    def df_resid(self) -> int:
        return self.nobs - self.coefficients.size

    @property
    def sigma2(self) -> float:
        """Residual variance with degrees-of-freedom correction."""
        return self.rss / self.df_resid


def _collinear_columns(X: np.ndarray) -> tuple[int, ...]:
    bad = []
    kept: list[int] = []
    for j in range(X.shape[1]):
        cand = kept + [j]
        Xc = X[:, cand]
        norms = np.linalg.norm(Xc, axis=0)
        if norms[-1] == 0:
            bad.append(j)
            continue
        r = np.linalg.qr(Xc / norms, mode="r")
        if abs(r[-1, -1]) < RANK_TOL:
            bad.append(j)
        else:
            kept.append(j)
    return tuple(bad)


def ols(y, X) -> OlsFit:
    """Ordinary least squares through a QR decomposition of ``X``.

    Raises
    ------
    RankDeficientError
        If ``X`` is not of full column rank; ``err.columns`` lists the
        columns that are linear combinations of earlier ones.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if n != y.size:
        raise DataError(f"design has {n} rows but y has {y.size} values")
    if n <= k:
        raise DataError(f"need more observations ({n}) than regressors ({k})")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise DataError("non-finite values in regression data")

    norms = np.linalg.norm(X, axis=0)
    if (norms == 0).any():
        cols = _collinear_columns(X)
        raise RankDeficientError(f"design matrix is rank deficient; collinear columns {cols}", cols)
    q, r = np.linalg.qr(X / norms)
    if np.abs(np.diag(r)).min() < RANK_TOL:
        cols = _collinear_columns(X)
        raise RankDeficientError(f"design matrix is rank deficient; collinear columns {cols}", cols)

    beta_scaled = np.linalg.solve(r, q.T @ y)
    beta = beta_scaled / norms
    resid = y - X @ beta
    rss = float(resid @ resid)
    rinv = np.linalg.solve(r, np.eye(k))
    cov_scaled = (rss / (n - k)) * (rinv @ rinv.T)
    se = np.sqrt(np.diag(cov_scaled)) / norms
    with np.errstate(divide="ignore", invalid="ignore"):
        t = beta / se
    return OlsFit(beta, se, t, resid, rss, n)


def long_run_variance(u, bandwidth: int) -> float:
    """Newey-West estimate with Bartlett weights ``1 - j/(bandwidth+1)``.

    Autocovariances are uncentred with divisor ``n``.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    n = u.size
    if bandwidth < 0:
        raise ValueError("bandwidth must be >= 0")
    if bandwidth >= n:
        raise DataError(f"bandwidth {bandwidth} must be smaller than sample size {n}")
    lrv = float(u @ u) / n
    for j in range(1, bandwidth + 1):
        w = 1.0 - j / (bandwidth + 1.0)
        lrv += 2.0 * w * float(u[j:] @ u[:-j]) / n
    return lrv


def default_bandwidth(nobs: int) -> int:
    return int(np.floor(4.0 * (nobs / 100.0) ** (2.0 / 9.0)))
