"""Independent reference computations used to freeze expected values.

Nothing here imports the package under test. Rational arithmetic is used
where a closed form exists so the reference values are exact.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def solve_fraction(A, b):
    """Gauss-Jordan elimination over the rationals."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


def ols_normal_equations(y, X):
    """Exact OLS coefficients and residual sum of squares from X'X b = X'y."""
    y = [Fraction(v) for v in y]
    X = [[Fraction(v) for v in row] for row in X]
    k = len(X[0])
    XtX = [[sum(r[i] * r[j] for r in X) for j in range(k)] for i in range(k)]
    Xty = [sum(r[i] * yi for r, yi in zip(X, y)) for i in range(k)]
    b = solve_fraction(XtX, Xty)
    resid = [yi - sum(bj * xj for bj, xj in zip(b, r)) for r, yi in zip(X, y)]
    rss = sum(e * e for e in resid)
    return b, rss


def bartlett_lrv(u, q):
    """Uncentred Bartlett long-run variance with divisor n, exact."""
    u = [Fraction(v) for v in u]
    n = len(u)
    total = sum(v * v for v in u) / n
    for j in range(1, q + 1):
        w = 1 - Fraction(j, q + 1)
        total += 2 * w * sum(u[t] * u[t - j] for t in range(j, n)) / n
    return total


def cumulative_objective(y, g, slope, intercept):
    """RMS distance between running sums of ``y`` and ``slope*g + intercept``."""
    d = np.cumsum(np.asarray(y) - (slope * np.asarray(g) + intercept))
    return float(np.sqrt(np.mean(d * d)))


def brute_force_fit(y_by_lag, g_by_lag, centre, half_width, step):
    """Direct evaluation of the cumulative objective on a rectangular grid.

    ``y_by_lag[lag]`` and ``g_by_lag[lag]`` are the aligned response and
    lagged driver for each candidate lag. The grid is centred on
    ``centre = (slope, intercept)`` with half-widths ``half_width`` and
    spacings ``step``. Returns ``(objective, lag, slope, intercept)``.
    """
    best = None
    s_vals = centre[0] + np.arange(-half_width[0], half_width[0] + step[0] / 2, step[0])
    b_vals = centre[1] + np.arange(-half_width[1], half_width[1] + step[1] / 2, step[1])
    for lag in sorted(y_by_lag, key=abs):
        cy = np.cumsum(y_by_lag[lag])
        cg = np.cumsum(g_by_lag[lag])
        k = np.arange(1, cy.size + 1)
        for s in s_vals:
            base = cy - s * cg
            # all intercepts at once: residual running sum is base - b*k
            R = base[None, :] - b_vals[:, None] * k[None, :]
            vals = np.sqrt(np.mean(R * R, axis=1))
            i = int(np.argmin(vals))
            cand = (float(vals[i]), lag, float(s), float(b_vals[i]))
            if best is None or cand[0] < best[0]:
                best = cand
    return best


def brute_force_fit_multi(y, X, centre, half_width, step, chunk=50_000):
    """Cumulative-objective grid scan for several regressors plus an intercept.

    ``X`` is ``(n, m)``; ``centre``, ``half_width`` and ``step`` have
    ``m + 1`` entries, the last one for the intercept. Every grid cell is
    evaluated. Returns ``(objective, coefficients)``.
    """
    y = np.asarray(y, dtype=float)
    X = np.column_stack([np.asarray(X, dtype=float), np.ones(y.size)])
    axes = [c + np.arange(-h, h + s / 2, s) for c, h, s in zip(centre, half_width, step)]
    cells = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    cy = np.cumsum(y)
    cX = np.cumsum(X, axis=0)
    best_val, best_coef = np.inf, None
    for c0 in range(0, cells.shape[0], chunk):
        C = cells[c0 : c0 + chunk]
        R = cy[None, :] - C @ cX.T
        vals = np.sqrt(np.mean(R * R, axis=1))
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val, best_coef = float(vals[i]), C[i].copy()
    return best_val, best_coef
