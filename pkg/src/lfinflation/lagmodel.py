"""Piecewise lagged-linear laws linking labour-force change to inflation and
unemployment, and their calibration on cumulative curves.

A model is a list of segments. Inside a segment the response follows

    response(t) = slope * g(t - lag) + intercept

where ``g`` is the relative change of the driver (or the driver itself).
The generalized law adds a lagged unemployment term:

    response(t) = slope_lf * g(t - lag_lf) + slope_ue * ue(t - lag_ue) + intercept

Calibration fits each segment separately by matching running sums of the
observed and predicted response over the segment, which lets independent
measurement noise cancel instead of dominating the fit.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigError, DataError, SeriesWarning
from .series import Frequency, Period, Series, growth_rate

__all__ = [
    "Segment",
    "PiecewiseLagModel",
    "GeneralizedSegment",
    "GeneralizedModel",
    "Grid",
    "CalibrationConfig",
    "SegmentFit",
    "Calibration",
    "predict_piecewise",
    "predict_generalized",
    "calibrate",
    "calibrate_generalized",
    "save_model",
    "load_model",
]

TRANSFORMS = ("growth_rate", "identity")
OBJECTIVES = ("cumulative_rms", "annual_rms")


def _period_or_none(p) -> Optional[Period]:
    return None if p is None else Period.parse(p)


def _check_segment_order(segments, name: str) -> None:
    for i, seg in enumerate(segments):
        if seg.start is not None and seg.end is not None and seg.end < seg.start:
            raise ConfigError(f"{name} segment {i}: end {seg.end} before start {seg.start}")
        if i > 0:
            prev = segments[i - 1]
            if prev.end is None or seg.start is None:
                raise ConfigError(f"{name}: only the first segment may be open at the start and the last at the end")
            if seg.start.ordinal <= prev.end.ordinal:
                raise ConfigError(f"{name}: segments {i - 1} and {i} overlap")


def _segment_index(segments, ordinal: int) -> int:
    for i, seg in enumerate(segments):
        lo = -np.inf if seg.start is None else seg.start.ordinal
        hi = np.inf if seg.end is None else seg.end.ordinal
        if lo <= ordinal <= hi:
            return i
    return -1


@dataclass(frozen=True)
class Segment:
    """One regime of a piecewise law. ``start``/``end`` are inclusive; ``None``
    leaves the segment open on that side."""

    start: Optional[Period]
    end: Optional[Period]
    slope: float
    intercept: float
    lag: int = 0

    def __post_init__(self):
        object.__setattr__(self, "start", _period_or_none(self.start))
        object.__setattr__(self, "end", _period_or_none(self.end))
        object.__setattr__(self, "lag", int(self.lag))

    def to_dict(self) -> dict:
        return {
            "start": None if self.start is None else str(self.start),
            "end": None if self.end is None else str(self.end),
            "lag": self.lag,
            "slope": float(self.slope),
            "intercept": float(self.intercept),
        }


@dataclass(frozen=True)
class PiecewiseLagModel:
    driver_id: str
    response_id: str
    segments: tuple[Segment, ...]
    driver_transform: str = "growth_rate"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.driver_transform not in TRANSFORMS:
            raise ConfigError(f"unknown driver transform {self.driver_transform!r}")
        if not self.segments:
            raise ConfigError("model needs at least one segment")
        _check_segment_order(self.segments, "PiecewiseLagModel")

    @property
    def final_segment(self) -> Segment:
        return self.segments[-1]

    def to_dict(self) -> dict:
        return {
            "kind": "piecewise",
            "driver_id": self.driver_id,
            "response_id": self.response_id,
            "driver_transform": self.driver_transform,
            "segments": [s.to_dict() for s in self.segments],
        }


@dataclass(frozen=True)
class GeneralizedSegment:
    start: Optional[Period]
    end: Optional[Period]
    slope_lf: float
    slope_ue: float
    intercept: float
    lag_lf: int = 1
    lag_ue: int = 1

    def __post_init__(self):
        object.__setattr__(self, "start", _period_or_none(self.start))
        object.__setattr__(self, "end", _period_or_none(self.end))
        object.__setattr__(self, "lag_lf", int(self.lag_lf))
        object.__setattr__(self, "lag_ue", int(self.lag_ue))

    def to_dict(self) -> dict:
        return {
            "start": None if self.start is None else str(self.start),
            "end": None if self.end is None else str(self.end),
            "lag_lf": self.lag_lf,
            "lag_ue": self.lag_ue,
            "slope_lf": float(self.slope_lf),
            "slope_ue": float(self.slope_ue),
            "intercept": float(self.intercept),
        }


@dataclass(frozen=True)
class GeneralizedModel:
    lf_id: str
    ue_id: str
    response_id: str
    segments: tuple[GeneralizedSegment, ...]
    lf_transform: str = "growth_rate"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if self.lf_transform not in TRANSFORMS:
            raise ConfigError(f"unknown driver transform {self.lf_transform!r}")
        if not self.segments:
            raise ConfigError("model needs at least one segment")
        _check_segment_order(self.segments, "GeneralizedModel")

    def to_dict(self) -> dict:
        return {
            "kind": "generalized",
            "lf_id": self.lf_id,
            "ue_id": self.ue_id,
            "response_id": self.response_id,
            "lf_transform": self.lf_transform,
            "segments": [s.to_dict() for s in self.segments],
        }


def _transform(driver: Series, how: str) -> Series:
    return growth_rate(driver) if how == "growth_rate" else driver


def _value_at(s: Series, ordinal: int) -> float:
    i = ordinal - s.start.ordinal
    if 0 <= i < len(s):
        return float(s.values[i])
    return np.nan


def _prediction_span(segments, inputs: list[tuple[Series, str]]) -> tuple[int, int]:
    """Ordinal range of periods at which the model can be asked for output.

    Open segment ends are bounded by where the lagged inputs are available.
    ``inputs`` pairs each input series with the name of its lag attribute.
    """
    first, last = segments[0], segments[-1]
    if first.start is not None:
        lo = first.start.ordinal
    else:
        lo = max(s.start.ordinal + getattr(first, attr) for s, attr in inputs)
    if last.end is not None:
        hi = last.end.ordinal
    else:
        hi = min(s.end.ordinal + getattr(last, attr) for s, attr in inputs)
    return lo, hi


def predict_piecewise(m: PiecewiseLagModel, driver: Series, response_id: Optional[str] = None) -> Series:
    """Evaluate the piecewise law on ``driver`` (given in levels when the
    model's transform is ``growth_rate``).

    Periods whose lagged driver value is unavailable come out missing and
    are reported through a :class:`SeriesWarning`.
    """
    g = _transform(driver, m.driver_transform)
    lo, hi = _prediction_span(m.segments, [(g, "lag")])
    if hi < lo:
        raise DataError(f"driver {driver.id!r} does not cover any modelled period")
    out = np.full(hi - lo + 1, np.nan)
    uncovered = []
    for k, o in enumerate(range(lo, hi + 1)):
        i = _segment_index(m.segments, o)
        if i < 0:
            uncovered.append(o)
            continue
        seg = m.segments[i]
        x = _value_at(g, o - seg.lag)
        if np.isnan(x):
            uncovered.append(o)
            continue
        out[k] = seg.slope * x + seg.intercept
    start = Period.from_ordinal(lo, g.frequency)
    if uncovered:
        txt = ", ".join(str(Period.from_ordinal(o, g.frequency)) for o in uncovered[:10])
        warnings.warn(f"predict({m.response_id}): no driver value or segment at {txt}", SeriesWarning, stacklevel=2)
    if np.isnan(out).all():
        raise DataError(f"model for {m.response_id!r} produced no predictions")
    return Series(response_id or f"pred({m.response_id})", g.frequency, start, out, "rate per period")


def predict_generalized(m: GeneralizedModel, lf: Series, ue: Series, response_id: Optional[str] = None) -> Series:
    if lf.frequency is not ue.frequency:
        raise DataError("labour force and unemployment must share a frequency")
    g = _transform(lf, m.lf_transform)
    lo, hi = _prediction_span(m.segments, [(g, "lag_lf"), (ue, "lag_ue")])
    if hi < lo:
        raise DataError("inputs do not cover any modelled period")
    out = np.full(hi - lo + 1, np.nan)
    uncovered = []
    for k, o in enumerate(range(lo, hi + 1)):
        i = _segment_index(m.segments, o)
        if i < 0:
            uncovered.append(o)
            continue
        seg = m.segments[i]
        x = _value_at(g, o - seg.lag_lf)
        u = _value_at(ue, o - seg.lag_ue)
        if np.isnan(x) or np.isnan(u):
            uncovered.append(o)
            continue
        out[k] = seg.slope_lf * x + seg.slope_ue * u + seg.intercept
    if uncovered:
        txt = ", ".join(str(Period.from_ordinal(o, g.frequency)) for o in uncovered[:10])
        warnings.warn(f"predict({m.response_id}): missing inputs or segment at {txt}", SeriesWarning, stacklevel=2)
    if np.isnan(out).all():
        raise DataError(f"model for {m.response_id!r} produced no predictions")
    return Series(response_id or f"pred({m.response_id})", g.frequency, Period.from_ordinal(lo, g.frequency), out,
                  "rate per period")


# --------------------------------------------------------------------------
# calibration


@dataclass(frozen=True)
class Grid:
    """Uniform grid ``lo, lo + step, ..., hi``; nodes are integer multiples of ``step``."""

    lo: float
    hi: float
    step: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi) and np.isfinite(self.step)):
            raise ConfigError("grid bounds must be finite")
        if self.step <= 0 or self.hi < self.lo:
            raise ConfigError(f"empty grid {self}")

    def values(self) -> np.ndarray:
        k0 = int(np.ceil(self.lo / self.step - 1e-9))
        k1 = int(np.floor(self.hi / self.step + 1e-9))
        if k1 < k0:
            raise ConfigError(f"grid {self} has no nodes")
        return np.arange(k0, k1 + 1) * self.step

    def snap(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """The two grid nodes bracketing each ``x`` (clipped to the grid)."""
        v = self.values()
        k = np.clip(np.floor((x - v[0]) / self.step), 0, v.size - 1).astype(int)
        k2 = np.minimum(k + 1, v.size - 1)
        return v[k], v[k2]


@dataclass(frozen=True)
class CalibrationConfig:
    """Settings for :func:`calibrate` and :func:`calibrate_generalized`.

    ``breakpoints`` are the first periods of the second, third, ... segment.
    ``fixed_slopes`` maps a segment index to a slope held fixed while the
    remaining coefficients are fitted.
    """

    breakpoints: tuple[Period, ...] = ()
    lags: tuple[int, ...] = (-1, 0, 1, 2, 3)
    slope_grid: Grid = Grid(-8.0, 8.0, 0.01)
    intercept_grid: Grid = Grid(-0.10, 0.10, 0.0005)
    ue_slope_grid: Grid = Grid(-8.0, 8.0, 0.01)
    ue_lags: tuple[int, ...] = (-1, 0, 1, 2, 3)
    refine: bool = True
    objective: str = "cumulative_rms"
    driver_transform: str = "growth_rate"
    start: Optional[Period] = None
    end: Optional[Period] = None
    fixed_slopes: dict = field(default_factory=dict)
    min_points: int = 5

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(sorted(Period.parse(p) for p in self.breakpoints)))
        object.__setattr__(self, "start", _period_or_none(self.start))
        object.__setattr__(self, "end", _period_or_none(self.end))
        object.__setattr__(self, "lags", tuple(int(v) for v in self.lags))
        object.__setattr__(self, "ue_lags", tuple(int(v) for v in self.ue_lags))
        object.__setattr__(self, "fixed_slopes", {int(k): float(v) for k, v in dict(self.fixed_slopes).items()})
        if not self.lags or not self.ue_lags:
            raise ConfigError("lag search range is empty")
        if self.objective not in OBJECTIVES:
            raise ConfigError(f"unknown objective {self.objective!r}")
        if self.driver_transform not in TRANSFORMS:
            raise ConfigError(f"unknown driver transform {self.driver_transform!r}")
        for g in (self.slope_grid, self.intercept_grid, self.ue_slope_grid):
            g.values()


@dataclass(frozen=True)
class SegmentFit:
    segment: object
    objective: float
    grid_objective: float
    cumulative_rms: float
    annual_rms: float
    nobs: int
    residual: Series
    lag_profile: dict

    def to_dict(self) -> dict:
        return {
            "segment": self.segment.to_dict(),
            "objective": self.objective,
            "grid_objective": self.grid_objective,
            "cumulative_rms": self.cumulative_rms,
            "annual_rms": self.annual_rms,
            "nobs": self.nobs,
            "lag_profile": {str(k): v for k, v in self.lag_profile.items()},
        }


@dataclass(frozen=True)
class Calibration:
    model: object
    fits: tuple[SegmentFit, ...]
    objective: str

    @property
    def objective_value(self) -> float:
        """Worst per-segment objective."""
        return max(f.objective for f in self.fits)

    @property
    def residual(self) -> Series:
        """Observed minus predicted over all calibrated segments."""
        parts = [f.residual for f in self.fits]
        lo = parts[0].start.ordinal
        hi = parts[-1].end.ordinal
        vals = np.full(hi - lo + 1, np.nan)
        for p in parts:
            i = p.start.ordinal - lo
            vals[i : i + len(p)] = p.values
        return Series("residual", parts[0].frequency, parts[0].start, vals, parts[0].units)


def _segment_bounds(cfg: CalibrationConfig, lo: int, hi: int, freq: Frequency) -> list[tuple[int, int]]:
    cuts = [p.ordinal for p in cfg.breakpoints]
    for p in cfg.breakpoints:
        if p.frequency is not freq:
            raise ConfigError(f"breakpoint {p} does not match {freq.value} data")
        if not lo < p.ordinal <= hi:
            raise ConfigError(f"breakpoint {p} lies outside the calibration span "
                              f"{Period.from_ordinal(lo, freq)}..{Period.from_ordinal(hi, freq)}")
    edges = [lo] + cuts + [hi + 1]
    return [(edges[i], edges[i + 1] - 1) for i in range(len(edges) - 1)]


def _stack_cols(ordinals: np.ndarray, cols: list[tuple[Series, int]]) -> np.ndarray:
    out = np.empty((ordinals.size, len(cols)))
    for j, (s, lag) in enumerate(cols):
        out[:, j] = [_value_at(s, o - lag) for o in ordinals]
    return out


def _usable(ordinals: np.ndarray, needs: list[tuple[Series, Sequence[int]]]) -> np.ndarray:
    ok = np.ones(ordinals.size, dtype=bool)
    for s, lags in needs:
        for lag in lags:
            ok &= ~np.isnan(_stack_cols(ordinals, [(s, lag)])[:, 0])
    return ordinals[ok]


def _objective_targets(y: np.ndarray, X: np.ndarray, objective: str) -> tuple[np.ndarray, np.ndarray]:
    """Transform (response, regressors incl. constant column) for the chosen objective."""
    if objective == "cumulative_rms":
        return np.cumsum(y), np.cumsum(X, axis=0)
    return y, X


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(v * v)))


def _grid_search(Y: np.ndarray, X: np.ndarray, grids: list[np.ndarray], icpt_grid: Grid):
    """Exhaustive search over slope grids with the intercept on ``icpt_grid``.

    For fixed slopes the objective is a convex quadratic in the intercept, so
    its grid minimiser is one of the two nodes bracketing the continuous
    minimiser; checking both is exactly equivalent to scanning every
    intercept node. Returns ``(value, slopes..., intercept)`` of the best cell.
    """
    K = X[:, -1]
    kk = float(K @ K)
    mesh = np.meshgrid(*grids, indexing="ij")
    slopes = [m.ravel() for m in mesh]
    best = None
    chunk = 200_000
    for c0 in range(0, slopes[0].size, chunk):
        S = np.column_stack([s[c0 : c0 + chunk] for s in slopes])
        R0 = Y[None, :] - S @ X[:, :-1].T
        bstar = (R0 @ K) / kk
        b_lo, b_hi = icpt_grid.snap(bstar)
        for b in (b_lo, b_hi):
            R = R0 - b[:, None] * K[None, :]
            val = np.sqrt(np.mean(R * R, axis=1))
            key = np.lexsort((np.abs(b), *[np.abs(S[:, j]) for j in range(S.shape[1] - 1, -1, -1)], val))
            i = key[0]
            cand = (float(val[i]), *[float(v) for v in S[i]], float(b[i]))
            if best is None or _better(cand, best):
                best = cand
    return best


def _better(a: tuple, b: tuple) -> bool:
    """Order candidates by objective, then smaller |slope| terms, then smaller |intercept|."""
    ka = (a[0],) + tuple(abs(v) for v in a[1:])
    kb = (b[0],) + tuple(abs(v) for v in b[1:])
    return ka < kb


def _refine(Y: np.ndarray, X: np.ndarray, x0: np.ndarray, steps: np.ndarray, free: np.ndarray,
            bounds: list) -> tuple[np.ndarray, float]:
    """Nelder-Mead polish of the free coefficients starting at the grid optimum,
    kept inside the box spanned by the grids."""

    def f(p):
        full = x0.copy()
        full[free] = p
        return _rms(Y - X @ full)

    start = x0[free]
    f0 = f(start)
    if f0 == 0.0:
        return x0, f0
    simplex = [start]
    for j in range(start.size):
        v = start.copy()
        lo, hi = bounds[j]
        v[j] = v[j] + steps[free][j] if v[j] + steps[free][j] <= hi else v[j] - steps[free][j]
        simplex.append(v)
    res = minimize(
        f,
        start,
        method="Nelder-Mead",
        bounds=bounds,
        options=dict(initial_simplex=np.array(simplex), xatol=1e-10, fatol=1e-16, maxiter=5_000, maxfev=10_000),
    )
    if res.fun < f0:
        out = x0.copy()
        out[free] = res.x
        return out, float(res.fun)
    return x0, f0


def _box(g: Grid) -> tuple[float, float]:
    v = g.values()
    return float(v[0]), float(v[-1])


def _fit_segment(y, X, slope_grids, icpt_grid, refine, objective, steps, boxes):
    """Grid search and optional refinement for one lag choice.

    ``X`` holds the regressors followed by a constant column and ``boxes``
    the ``(lo, hi)`` range of each coefficient. Returns
    ``(coefficients, objective, grid_objective)``.
    """
    Y, Xt = _objective_targets(y, X, objective)
    best = _grid_search(Y, Xt, slope_grids, icpt_grid)
    grid_val = best[0]
    coefs = np.array(best[1:])
    val = grid_val
    if refine:
        free = np.array([g.size > 1 for g in slope_grids] + [True])
        coefs, val = _refine(Y, Xt, coefs, steps, free, [b for b, f in zip(boxes, free) if f])
    return coefs, val, grid_val


def _lag_key(lags: tuple[int, ...]) -> tuple:
    return tuple(abs(v) for v in lags) + lags


def _select(cands: list) -> tuple:
    """Pick the best candidate; ties go to smaller |lag| then smaller |slope|."""
    def key(c):
        lags, coefs, val, _ = c
        return (val, _lag_key(lags), tuple(abs(v) for v in coefs[:-1]), abs(coefs[-1]))
    return min(cands, key=key)


def _calibration_ordinals(response: Series, cfg: CalibrationConfig) -> tuple[int, int]:
    lo, hi = response.start.ordinal, response.end.ordinal
    if cfg.start is not None:
        lo = max(lo, cfg.start.ordinal)
    if cfg.end is not None:
        hi = min(hi, cfg.end.ordinal)
    if hi < lo:
        raise ConfigError("calibration window does not intersect the response series")
    return lo, hi


def calibrate(driver: Series, response: Series, cfg: CalibrationConfig = CalibrationConfig()) -> Calibration:
    """Fit a :class:`PiecewiseLagModel` segment by segment.

    Each segment's (lag, slope, intercept) minimises the RMS distance
    between the observed and predicted running sums over the segment (or the
    plain annual RMS when ``cfg.objective == "annual_rms"``). The search is
    exhaustive over ``cfg.lags`` and the coefficient grids, followed by an
    optional Nelder-Mead polish. All candidate lags are scored on the same
    set of periods so their objective values are comparable.

    The first segment is left open towards the past and the last towards
    the future, so the returned model can be used for projections.
    """
    if driver.frequency is not response.frequency:
        raise DataError("driver and response must share a frequency")
    g = _transform(driver, cfg.driver_transform)
    lo, hi = _calibration_ordinals(response, cfg)
    bounds = _segment_bounds(cfg, lo, hi, response.frequency)
    slope_vals = cfg.slope_grid.values()
    steps = np.array([cfg.slope_grid.step, cfg.intercept_grid.step])
    boxes = [_box(cfg.slope_grid), _box(cfg.intercept_grid)]
    segments, fits = [], []
    for si, (a, b) in enumerate(bounds):
        ords = _usable(np.arange(a, b + 1), [(response, [0]), (g, cfg.lags)])
        if ords.size < cfg.min_points:
            raise DataError(f"segment {si} ({Period.from_ordinal(a, g.frequency)}.."
                            f"{Period.from_ordinal(b, g.frequency)}) has {ords.size} usable points; "
                            f"need {cfg.min_points}")
        y = _stack_cols(ords, [(response, 0)])[:, 0]
        grid = [np.array([cfg.fixed_slopes[si]])] if si in cfg.fixed_slopes else [slope_vals]
        cands = []
        for lag in cfg.lags:
            X = np.column_stack([_stack_cols(ords, [(g, lag)])[:, 0], np.ones(ords.size)])
            coefs, val, gval = _fit_segment(y, X, grid, cfg.intercept_grid, cfg.refine, cfg.objective, steps, boxes)
            cands.append(((lag,), coefs, val, gval))
        (lag,), coefs, val, gval = _select(cands)
        seg = Segment(
            None if si == 0 else Period.from_ordinal(a, g.frequency),
            None if si == len(bounds) - 1 else Period.from_ordinal(b, g.frequency),
            float(coefs[0]),
            float(coefs[1]),
            lag,
        )
        X = np.column_stack([_stack_cols(ords, [(g, lag)])[:, 0], np.ones(ords.size)])
        fits.append(_segment_fit(seg, y, X, coefs, val, gval, ords, g.frequency, cands, response.units))
        segments.append(seg)
    model = PiecewiseLagModel(driver.id, response.id, tuple(segments), cfg.driver_transform)
    return Calibration(model, tuple(fits), cfg.objective)


def _segment_fit(seg, y, X, coefs, val, gval, ords, freq, cands, units) -> SegmentFit:
    resid_vals = y - X @ coefs
    lo, hi = int(ords[0]), int(ords[-1])
    full = np.full(hi - lo + 1, np.nan)
    full[ords - lo] = resid_vals
    resid = Series("residual", freq, Period.from_ordinal(lo, freq), full, units)
    profile = {c[0] if len(c[0]) > 1 else c[0][0]: c[2] for c in cands}
    return SegmentFit(
        seg,
        float(val),
        float(gval),
        _rms(np.cumsum(resid_vals)),
        _rms(resid_vals),
        int(ords.size),
        resid,
        profile,
    )


def calibrate_generalized(
    lf: Series, ue: Series, response: Series, cfg: CalibrationConfig = CalibrationConfig()
) -> Calibration:
    """Fit a :class:`GeneralizedModel` with the same per-segment procedure as
    :func:`calibrate`, over a three-coefficient grid and every pair of lags
    in ``cfg.lags`` x ``cfg.ue_lags``."""
    if not (lf.frequency is ue.frequency is response.frequency):
        raise DataError("all inputs must share a frequency")
    g = _transform(lf, cfg.driver_transform)
    lo, hi = _calibration_ordinals(response, cfg)
    bounds = _segment_bounds(cfg, lo, hi, response.frequency)
    slope_vals = cfg.slope_grid.values()
    ue_vals = cfg.ue_slope_grid.values()
    steps = np.array([cfg.slope_grid.step, cfg.ue_slope_grid.step, cfg.intercept_grid.step])
    boxes = [_box(cfg.slope_grid), _box(cfg.ue_slope_grid), _box(cfg.intercept_grid)]
    segments, fits = [], []
    for si, (a, b) in enumerate(bounds):
        ords = _usable(np.arange(a, b + 1), [(response, [0]), (g, cfg.lags), (ue, cfg.ue_lags)])
        if ords.size < cfg.min_points:
            raise DataError(f"segment {si} has {ords.size} usable points; need {cfg.min_points}")
        y = _stack_cols(ords, [(response, 0)])[:, 0]
        grid = [np.array([cfg.fixed_slopes[si]]) if si in cfg.fixed_slopes else slope_vals, ue_vals]
        cands = []
        for lag_lf, lag_ue in itertools.product(cfg.lags, cfg.ue_lags):
            X = np.column_stack([_stack_cols(ords, [(g, lag_lf), (ue, lag_ue)]), np.ones(ords.size)])
            coefs, val, gval = _fit_segment(y, X, grid, cfg.intercept_grid, cfg.refine, cfg.objective, steps, boxes)
            cands.append(((lag_lf, lag_ue), coefs, val, gval))
        (lag_lf, lag_ue), coefs, val, gval = _select(cands)
        seg = GeneralizedSegment(
            None if si == 0 else Period.from_ordinal(a, g.frequency),
            None if si == len(bounds) - 1 else Period.from_ordinal(b, g.frequency),
            float(coefs[0]),
            float(coefs[1]),
            float(coefs[2]),
            lag_lf,
            lag_ue,
        )
        X = np.column_stack([_stack_cols(ords, [(g, lag_lf), (ue, lag_ue)]), np.ones(ords.size)])
        fits.append(_segment_fit(seg, y, X, coefs, val, gval, ords, g.frequency, cands, response.units))
        segments.append(seg)
    model = GeneralizedModel(lf.id, ue.id, response.id, tuple(segments), cfg.driver_transform)
    return Calibration(model, tuple(fits), cfg.objective)


# --------------------------------------------------------------------------
# model files

MODEL_FORMAT_VERSION = 1


def model_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "piecewise":
        segs = tuple(Segment(s.get("start"), s.get("end"), s["slope"], s["intercept"], s["lag"]) for s in d["segments"])
        return PiecewiseLagModel(d["driver_id"], d["response_id"], segs, d.get("driver_transform", "growth_rate"))
    if kind == "generalized":
        segs = tuple(
            GeneralizedSegment(s.get("start"), s.get("end"), s["slope_lf"], s["slope_ue"], s["intercept"],
                               s.get("lag_lf", 1), s.get("lag_ue", 1))
            for s in d["segments"]
        )
        return GeneralizedModel(d["lf_id"], d["ue_id"], d["response_id"], segs, d.get("lf_transform", "growth_rate"))
    raise ConfigError(f"unknown model kind {kind!r}")


def dumps_model(model) -> str:
    """JSON text; floats are written with ``repr`` precision so reloads are exact."""
    doc = {"format": "lfinflation-model", "version": MODEL_FORMAT_VERSION, **model.to_dict()}
    return json.dumps(doc, indent=2) + "\n"


def save_model(model, path) -> None:
    Path(path).write_text(dumps_model(model))


def load_model(path):
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    if doc.get("format") != "lfinflation-model":
        raise ConfigError(f"{path} is not a model file")
    if doc.get("version") != MODEL_FORMAT_VERSION:
        raise ConfigError(f"unsupported model file version {doc.get('version')!r}")
    return model_from_dict(doc)
