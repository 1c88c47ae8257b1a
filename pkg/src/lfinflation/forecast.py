"""Inflation and unemployment projections from labour-force scenario paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ConfigError, DataError
from .lagmodel import (
    GeneralizedModel,
    GeneralizedSegment,
    PiecewiseLagModel,
    Segment,
    predict_generalized,
    predict_piecewise,
)
from .series import Frequency, Period, Series

__all__ = ["ForecastScenario", "ForecastResult", "project"]


@dataclass(frozen=True)
class ForecastScenario:
    name: str
    lf_path: Series

    def __post_init__(self):
        if self.lf_path.frequency is not Frequency.ANNUAL:
            raise DataError(f"scenario {self.name!r} must be annual")
        v = self.lf_path.values
        if np.isnan(v).any() or (v <= 0).any():
            raise DataError(f"scenario {self.name!r} must be strictly positive with no gaps")


@dataclass(frozen=True)
class ForecastResult:
    scenario: str
    inflation_path: Series
    unemployment_path: Optional[Series]
    model_ids: tuple[str, ...]


def _final_only(m):
    seg = m.segments[-1]
    if seg.end is not None:
        raise ConfigError(f"final segment of the {m.response_id!r} model is not open-ended (ends {seg.end})")
    if isinstance(m, PiecewiseLagModel):
        one = Segment(None, None, seg.slope, seg.intercept, seg.lag)
        return PiecewiseLagModel(m.driver_id, m.response_id, (one,), m.driver_transform), seg.lag
    one = GeneralizedSegment(None, None, seg.slope_lf, seg.slope_ue, seg.intercept, seg.lag_lf, seg.lag_ue)
    return GeneralizedModel(m.lf_id, m.ue_id, m.response_id, (one,), m.lf_transform), seg.lag_lf


def _check_cover(scenario: ForecastScenario, lag: int, transform: str, start: Period, end: Period) -> None:
    first_driver = scenario.lf_path.start.ordinal + (1 if transform == "growth_rate" else 0)
    need = range(start.ordinal - lag, end.ordinal - lag + 1)
    have_lo, have_hi = first_driver, scenario.lf_path.end.ordinal
    missing = [o for o in need if not have_lo <= o <= have_hi]
    if missing:
        years = ", ".join(str(Period(o)) for o in missing[:12])
        what = "labour-force growth rates" if transform == "growth_rate" else "driver values"
        raise DataError(f"scenario {scenario.name!r} lacks {what} for {years}"
                        + (f" (+{len(missing) - 12} more)" if len(missing) > 12 else ""))


def project(
    m: Union[PiecewiseLagModel, GeneralizedModel],
    scenario: ForecastScenario,
    horizon_end,
    ue_model: Optional[PiecewiseLagModel] = None,
    start=None,
) -> ForecastResult:
    """Apply the latest (open-ended) segment of each model to a scenario.

    ``ue_model`` maps labour-force change to unemployment. A generalized
    inflation model needs it, because the projected unemployment path is
    what feeds its unemployment term. ``start`` defaults to the first year
    the scenario can support.
    """
    end = Period.parse(horizon_end)
    infl_model, lag = _final_only(m)
    transform = infl_model.driver_transform if isinstance(infl_model, PiecewiseLagModel) else infl_model.lf_transform
    if start is None:
        start = scenario.lf_path.start.shift(lag + (1 if transform == "growth_rate" else 0))
    start = Period.parse(start)
    if end < start:
        raise ConfigError(f"horizon end {end} precedes forecast start {start}")
    _check_cover(scenario, lag, transform, start, end)

    ue_path = None
    ids = [m.response_id]
    if ue_model is not None:
        ue_one, ue_lag = _final_only(ue_model)
        if isinstance(infl_model, GeneralizedModel):
            ue_start = start.shift(-infl_model.segments[0].lag_ue)
        else:
            ue_start = start
        _check_cover(scenario, ue_lag, ue_one.driver_transform, ue_start, end)
        ue_path = predict_piecewise(ue_one, scenario.lf_path).window(ue_start, end)
        ue_path = ue_path.replace(id=f"{scenario.name}:{ue_model.response_id}")
        ids.append(ue_model.response_id)

    if isinstance(infl_model, GeneralizedModel):
        if ue_path is None:
            raise ConfigError("a generalized inflation model needs an unemployment model to project")
        infl = predict_generalized(infl_model, scenario.lf_path, ue_path)
    else:
        infl = predict_piecewise(infl_model, scenario.lf_path)
    infl = infl.window(start, end).replace(id=f"{scenario.name}:{m.response_id}")
    if ue_path is not None:
        ue_path = ue_path.window(start, end)
    return ForecastResult(scenario.name, infl, ue_path, tuple(ids))
