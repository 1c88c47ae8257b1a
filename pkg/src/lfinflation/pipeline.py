"""Command implementations behind the CLI.

Every command takes a :class:`Context` and returns an ordered mapping of
relative output path to file text. Nothing here touches the filesystem
except through the catalog, so the same run can be rendered twice and
compared byte for byte.

Every CSV starts with a ``# config_sha256=... catalog_sha256=...`` line
followed by a header row. Floats are written with ``repr`` precision and
missing values as empty fields.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import simulate
from .cointegration import engle_granger, johansen
from .config import RunConfig
from .errors import ConfigError
from .evaluate import evaluate as evaluate_fit, relative_cumulative_error
from .forecast import ForecastScenario, project
from .ingest import DataCatalog
from .lagmodel import (
    Calibration,
    GeneralizedModel,
    PiecewiseLagModel,
    calibrate as calibrate_piecewise,
    calibrate_generalized,
    dumps_model,
    predict_generalized,
    predict_piecewise,
)
from .series import Period, Series, align, cumulative, diff, growth_rate, moving_average, stack
from .unitroot import UnitRootSpec, adf_test, dfgls_test, pp_test

__all__ = ["Context", "COMMANDS", "run_command", "csv_text"]

Outputs = dict


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else repr(float(v))
    return str(v)


def csv_text(stamp: str, header: Iterable[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    buf.write(f"# {stamp}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _num(v, fmt: str = ".2f") -> str:
    return "." if v is None or (isinstance(v, float) and math.isnan(v)) else format(v, fmt)


@dataclass
class Fitted:
    name: str
    model: object
    calibration: Optional[Calibration]


@dataclass
class Context:
    cfg: RunConfig
    catalog: DataCatalog
    only: Optional[frozenset] = None
    _series: dict = field(default_factory=dict, repr=False)
    _fitted: dict = field(default_factory=dict, repr=False)

    @property
    def stamp(self) -> str:
        if "_stamp" not in self._series:
            self._series["_stamp"] = f"config_sha256={self.cfg.digest()} catalog_sha256={self.catalog.digest()}"
        return self._series["_stamp"]

    def series(self, id: str) -> Series:
        if id not in self._series:
            self._series[id] = self.catalog.load(id)
        return self._series[id]

    def wanted(self, *ids) -> bool:
        return self.only is None or any(i in self.only for i in ids if i is not None)

    def model_names(self) -> list[str]:
        return [n for n, m in self.cfg.models.items() if self.wanted(m.driver, m.response, m.ue)]

    def fitted(self, name: str) -> Fitted:
        if name in self._fitted:
            return self._fitted[name]
        spec = self.cfg.model(name)
        if spec.fixed is not None:
            f = Fitted(name, spec.fixed, None)
        elif spec.kind == "piecewise":
            cal = calibrate_piecewise(self.series(spec.driver), self.series(spec.response), spec.calibration)
            f = Fitted(name, cal.model, cal)
        else:
            cal = calibrate_generalized(
                self.series(spec.driver), self.series(spec.ue), self.series(spec.response), spec.calibration
            )
            f = Fitted(name, cal.model, cal)
        self._fitted[name] = f
        return f

    def observed(self, name: str) -> Series:
        return self.series(self.cfg.model(name).response)

    def prediction(self, name: str) -> Series:
        spec = self.cfg.model(name)
        m = self.fitted(name).model
        if isinstance(m, GeneralizedModel):
            return predict_generalized(m, self.series(spec.driver), self.series(spec.ue))
        return predict_piecewise(m, self.series(spec.driver))

    def model_window(self, name: str) -> tuple[Optional[Period], Optional[Period]]:
        cal = self.cfg.model(name).calibration
        return (cal.start, cal.end) if cal is not None else (None, None)


# --------------------------------------------------------------------------
# urtest

def _transformed(s: Series, steps) -> Series:
    for step in steps:
        s = diff(s) if step == "diff" else growth_rate(s)
    return s


def _star(r) -> str:
    return "*" if r.reject_at["1%"] else ""


def urtest(ctx: Context) -> Outputs:
    u = ctx.cfg.urtest
    if u is None:
        raise ConfigError("the config has no 'urtest' section")
    rows, text_rows = [], []
    for row in u.rows:
        if not ctx.wanted(row.series):
            continue
        s = _transformed(ctx.series(row.series), row.transform)
        adf = adf_test(s, UnitRootSpec("ADF", u.deterministic, u.adf_lags, u.table))
        gls_det = u.dfgls_deterministic or ("constant" if u.deterministic == "none" else u.deterministic)
        gls = dfgls_test(s, UnitRootSpec("DFGLS", gls_det, u.dfgls_lags, u.table))
        zr, zt = pp_test(s, UnitRootSpec("PP", u.deterministic, u.pp_bandwidth, u.table))
        for r in (adf, gls, zr, zt):
            cv = r.critical_values
            rows.append((row.label, row.series, "|".join(row.transform), s.frequency.value, r.name, r.lags,
                         r.nobs, r.statistic, cv["1%"], cv["5%"], cv["10%"], r.reject_at["1%"]))
        text_rows.append((row.label, [adf, gls, zr, zt]))
    if not rows:
        raise ConfigError("no unit-root rows left after --series filtering")
    header = ("label", "series", "transform", "frequency", "test", "lags", "nobs", "statistic",
              "cv_1pct", "cv_5pct", "cv_10pct", "reject_1pct")
    lag_labels = sorted({r[1][1].lags for r in text_rows})
    gls_head = "DF-GLS (lag " + "/".join(str(v) for v in lag_labels) + ")"
    cols = ["", "DF", gls_head, "PP z(rho)", "PP z(t)"]
    lines = [f"# {ctx.stamp}", "Unit root tests; 1% critical value in parentheses; * rejects a unit root at 1%", ""]
    table = [cols]
    for label, rs in text_rows:
        table.append([label] + [f"{_num(r.statistic)}{_star(r)} ({_num(r.critical_values['1%'])})" for r in rs])
    widths = [max(len(r[i]) for r in table) for i in range(len(cols))]
    for r in table:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return {"urtest.csv": csv_text(ctx.stamp, header, rows), "urtest.txt": "\n".join(lines) + "\n"}


# --------------------------------------------------------------------------
# calibrate

def _segment_row(name, i, seg):
    d = seg.to_dict()
    lags = f"{d['lag_lf']}|{d['lag_ue']}" if "lag_lf" in d else str(d["lag"])
    slopes = (d["slope_lf"], d["slope_ue"]) if "slope_lf" in d else (d["slope"], None)
    return [name, i, d["start"], d["end"], lags, slopes[0], slopes[1], d["intercept"]]


def calibrate(ctx: Context) -> Outputs:
    out: Outputs = {}
    diag, profile = [], []
    lines = [f"# {ctx.stamp}", "Calibrated segments (objective: RMS distance of running sums unless noted)", ""]
    names = [n for n in ctx.model_names() if ctx.cfg.models[n].calibration is not None]
    if not names:
        raise ConfigError("no calibrated models in the config (after --series filtering)")
    for name in names:
        f = ctx.fitted(name)
        out[f"models/{name}.json"] = dumps_model(f.model)
        lines.append(f"{name}: {f.model.response_id} ~ {getattr(f.model, 'driver_id', None) or f.model.lf_id}"
                     f" [{f.calibration.objective}]")
        for i, fit in enumerate(f.calibration.fits):
            diag.append(_segment_row(name, i, fit.segment)
                        + [fit.objective, fit.grid_objective, fit.cumulative_rms, fit.annual_rms, fit.nobs])
            for lag, val in fit.lag_profile.items():
                lag = "|".join(str(v) for v in lag) if isinstance(lag, tuple) else lag
                profile.append((name, i, lag, val))
            r = diag[-1]
            lines.append(f"  segment {i}: {r[2] or '-inf'}..{r[3] or '+inf'} lag {r[4]} slope {r[5]:.4f}"
                         + (f" ue_slope {r[6]:.4f}" if r[6] is not None else "")
                         + f" intercept {r[7]:.5f} objective {fit.objective:.3e} n={fit.nobs}")
    header = ("model", "segment", "start", "end", "lag", "slope", "slope_ue", "intercept", "objective",
              "grid_objective", "cumulative_rms", "annual_rms", "nobs")
    out["calibrate.csv"] = csv_text(ctx.stamp, header, diag)
    out["calibrate_lags.csv"] = csv_text(ctx.stamp, ("model", "segment", "lag", "objective"), profile)
    out["calibrate.txt"] = "\n".join(lines) + "\n"
    return out


# --------------------------------------------------------------------------
# coint

def _pair(ctx: Context, name: str, start, end):
    obs = ctx.observed(name).window(start, end)
    pred = ctx.prediction(name).window(start, end)
    periods, Y = stack([obs, pred])
    return periods, Y


def coint(ctx: Context) -> Outputs:
    jobs = [c for c in ctx.cfg.coint if c.model in ctx.model_names()]
    if not jobs:
        raise ConfigError("no cointegration jobs in the config (after --series filtering)")
    eg_rows, jo_rows = [], []
    lines = [f"# {ctx.stamp}"]
    for c in jobs:
        ws, we = ctx.model_window(c.model)
        periods, Y = _pair(ctx, c.model, c.start or ws, c.end or we)
        span = f"{periods[0]}..{periods[-1]}"
        resid = Y[:, 0] - Y[:, 1]
        eg = engle_granger(resid, lags=c.dfgls_lags, deterministic=c.deterministic)
        lines += ["", f"{c.model}: residual unit-root tests, {span} (1% critical value; * rejects at 1%)"]
        for r in eg.residual_tests:
            label = f"DF-GLS lag {r.lags}" if r.name == "DF-GLS" else r.name
            eg_rows.append((c.model, span, r.name, r.lags, r.nobs, r.statistic, r.critical_values["1%"],
                            r.critical_values["5%"], r.reject_at["1%"]))
            lines.append(f"  {label:<14}{_num(r.statistic, '.3f') + _star(r):>10}  {_num(r.critical_values['1%']):>7}")
        lines.append(f"  cointegrated at 1% (DF and both PP reject): {'yes' if eg.cointegrated_at_1pct else 'no'}")
        for ts in c.trend_specs:
            rep = johansen(Y, max_lag=c.max_lag, trend_spec=ts)
            lines += ["", f"{c.model}: Johansen trace test, trend {ts}, max lag {rep.max_lag}, T={rep.nobs}, "
                          f"selected rank {rep.selected_rank}",
                      "  rank        LL  eigenvalue  trace stat  5% critical"]
            for row in rep.rows:
                mark = "*" if row.rank == rep.selected_rank and row.trace_stat is not None else ""
                jo_rows.append((c.model, span, ts, rep.max_lag, rep.nobs, row.rank, row.log_likelihood,
                                row.eigenvalue, row.trace_stat, row.critical_5pct, rep.selected_rank))
                lines.append(f"  {row.rank:>4}  {row.log_likelihood:>8.1f}  {_num(row.eigenvalue):>10}"
                             f"  {_num(row.trace_stat) + mark:>10}  {_num(row.critical_5pct):>11}")
            if ts == "rconstant":
                lines.append("  note: 5% critical values for the restricted constant are the "
                             "Osterwald-Lenum (1992) case 1* figures")
    eg_head = ("model", "span", "test", "lags", "nobs", "statistic", "cv_1pct", "cv_5pct", "reject_1pct")
    jo_head = ("model", "span", "trend_spec", "max_lag", "nobs", "rank", "log_likelihood", "eigenvalue",
               "trace_stat", "cv_5pct", "selected_rank")
    return {
        "coint_residual.csv": csv_text(ctx.stamp, eg_head, eg_rows),
        "coint_johansen.csv": csv_text(ctx.stamp, jo_head, jo_rows),
        "coint.txt": "\n".join(lines) + "\n",
    }


# --------------------------------------------------------------------------
# evaluate

def evaluate(ctx: Context) -> Outputs:
    jobs = [e for e in ctx.cfg.evaluate if e.model in ctx.model_names()]
    if not jobs:
        raise ConfigError("no evaluation jobs in the config (after --series filtering)")
    rows = []
    lines = [f"# {ctx.stamp}", "model        preset  span         n   R2 annual  R2 cumulative  RMSFE   naive RMSFE"]
    for e in jobs:
        ws, we = ctx.model_window(e.model)
        obs, pred = ctx.observed(e.model), ctx.prediction(e.model)
        for preset in e.presets:
            rep = evaluate_fit(obs, pred, preset, e.start or ws, e.end or we)
            rel = rep.relative_cumulative_error.values
            final_rel = rel[-1] if rel.size else float("nan")
            d = rep.to_dict()
            rows.append((e.model, preset, d["span_start"], d["span_end"], d["nobs"], d["r2_annual"],
                         d["r2_cumulative"], d["rmsfe"], d["naive_rmsfe"], final_rel))
            lines.append(f"{e.model:<12} {preset:<7} {d['span_start']}..{d['span_end']} {d['nobs']:>3}"
                         f"  {d['r2_annual']:>9.3f}  {d['r2_cumulative']:>13.4f}  {d['rmsfe']:.4f}  "
                         f"{d['naive_rmsfe']:.4f}")
    header = ("model", "preset", "span_start", "span_end", "nobs", "r2_annual", "r2_cumulative", "rmsfe",
              "naive_rmsfe", "final_relative_cumulative_error")
    return {"evaluate.csv": csv_text(ctx.stamp, header, rows), "evaluate.txt": "\n".join(lines) + "\n"}


# --------------------------------------------------------------------------
# forecast

def _scenario_names(ctx: Context) -> list[str]:
    fc = ctx.cfg.forecast
    names = list(fc.scenarios) if fc.scenarios else list(ctx.catalog.scenarios)
    if not names:
        raise ConfigError("no forecast scenarios: list them in the config or the catalog")
    return names


def forecast_results(ctx: Context) -> list:
    fc = ctx.cfg.forecast
    if fc is None:
        raise ConfigError("the config has no 'forecast' section")
    infl = ctx.fitted(fc.inflation_model).model
    ue = ctx.fitted(fc.unemployment_model).model if fc.unemployment_model else None
    if ue is not None and not isinstance(ue, PiecewiseLagModel):
        raise ConfigError("the unemployment model for forecasts must be piecewise")
    out = []
    for name in _scenario_names(ctx):
        sc = ForecastScenario(name, ctx.catalog.load_scenario(name))
        out.append(project(infl, sc, fc.horizon_end, ue_model=ue, start=fc.start))
    return out


def forecast(ctx: Context) -> Outputs:
    results = forecast_results(ctx)
    rows = []
    lines = [f"# {ctx.stamp}", "scenario             variable       span         min      mean     max"]
    for res in results:
        for var, s in (("inflation", res.inflation_path), ("unemployment", res.unemployment_path)):
            if s is None:
                continue
            for p, v in zip(s.periods, s.values):
                rows.append((res.scenario, var, str(p), v))
            lines.append(f"{res.scenario:<20} {var:<14} {s.start}..{s.end}  {np.nanmin(s.values):.4f}  "
                         f"{np.nanmean(s.values):.4f}  {np.nanmax(s.values):.4f}")
    return {
        "forecast.csv": csv_text(ctx.stamp, ("scenario", "variable", "period", "value"), rows),
        "forecast.txt": "\n".join(lines) + "\n",
    }


# --------------------------------------------------------------------------
# plotdata

def _long(pairs) -> list:
    rows = []
    for label, s in pairs:
        for p, v in zip(s.periods, s.values):
            rows.append((str(p), label, v))
    return rows


def plotdata(ctx: Context) -> Outputs:
    pcfg = ctx.cfg.plotdata
    if pcfg is None:
        raise ConfigError("the config has no 'plotdata' section")
    out: Outputs = {}
    head = ("period", "series", "value")
    for name in pcfg.models:
        if name not in ctx.model_names():
            continue
        obs, pred = ctx.observed(name), ctx.prediction(name)
        a = align(obs, pred)
        lo, hi = a.periods[0], a.periods[-1]
        base = max(pcfg.cumulative_base or lo, lo)
        o, p = obs.window(base, hi), pred.window(base, hi)
        out[f"plot/{name}_{obs.frequency.value}.csv"] = csv_text(ctx.stamp, head, _long([("observed", obs.window(lo, hi)),
                                                                          ("predicted", pred.window(lo, hi))]))
        out[f"plot/{name}_cumulative.csv"] = csv_text(ctx.stamp, head, _long([("observed", cumulative(o)),
                                                                              ("predicted", cumulative(p))]))
        k_obs, k_pred = pcfg.windows(name)
        so, sp = moving_average(obs, k_obs), moving_average(pred, k_pred)
        out[f"plot/{name}_smoothed.csv"] = csv_text(
            ctx.stamp, head, _long([(f"observed_ma{k_obs}", so.window(max(so.start, lo), hi)),
                                    (f"predicted_ma{k_pred}", sp.window(max(sp.start, lo), hi))])
        )
        rel = relative_cumulative_error(o, p)
        err = Series("error", o.frequency, rel.start, cumulative(o).values - cumulative(p).values, o.units)
        out[f"plot/{name}_relative_error.csv"] = csv_text(ctx.stamp, head,
                                                          _long([("cumulative_error", err), ("relative_error", rel)]))
    fc = ctx.cfg.forecast
    if fc is not None and fc.inflation_model in ctx.model_names():
        rows = []
        for res in forecast_results(ctx):
            for var, s in (("inflation", res.inflation_path), ("unemployment", res.unemployment_path)):
                if s is not None:
                    rows += [(str(p), f"{res.scenario}:{var}", v) for p, v in zip(s.periods, s.values)]
        out["plot/forecast.csv"] = csv_text(ctx.stamp, head, rows)
    if not out:
        raise ConfigError("plotdata produced nothing (no models left after --series filtering)")
    return out


# --------------------------------------------------------------------------
# montecarlo

_MC_LABELS = {"ADF": ("ADF",), "DFGLS": ("DF-GLS",), "PP": ("PP z(rho)", "PP z(t)")}


def _mc_statistic(spec: UnitRootSpec, label: str):
    if label == "ADF":
        return lambda x: adf_test(x, spec)
    if label == "DF-GLS":
        return lambda x: dfgls_test(x, spec)
    if label == "PP z(rho)":
        return lambda x: pp_test(x, spec).z_rho
    return lambda x: pp_test(x, spec).z_tau


def montecarlo(ctx: Context) -> Outputs:
    mc = ctx.cfg.montecarlo
    if mc is None:
        raise ConfigError("the config has no 'montecarlo' section")
    seed = ctx.cfg.seed
    rows = []
    lines = [f"# {ctx.stamp}", f"Rejection frequencies at {mc.level}, T={mc.nobs}, {mc.replications} "
             f"replications, seed {seed}, deterministic {mc.deterministic}", ""]
    for proc, phi in mc.processes:
        if proc == "random_walk":
            gen = lambda rng: simulate.random_walk(mc.nobs, rng)  # noqa: E731
        elif proc == "ar1":
            gen = lambda rng, phi=phi: simulate.ar1(mc.nobs, phi, rng)  # noqa: E731
        else:
            raise ConfigError(f"unknown Monte Carlo process {proc!r}")
        for test in mc.tests:
            det = "constant" if test.upper().replace("-", "") == "DFGLS" and mc.deterministic == "none" \
                else mc.deterministic
            spec = UnitRootSpec(test, det)
            for label in _MC_LABELS[spec.test]:
                stat = _mc_statistic(spec, label)
                freq = simulate.rejection_frequency(lambda x: stat(x).reject_at[mc.level], gen, mc.replications, seed)
                rows.append((proc, phi, label, mc.nobs, mc.replications, mc.level, seed, freq))
                lines.append(f"  {proc:<12} phi={phi:<5} {label:<10} {freq:.3f}")
    header = ("process", "phi", "test", "nobs", "replications", "level", "seed", "rejection_rate")
    return {"montecarlo.csv": csv_text(ctx.stamp, header, rows), "montecarlo.txt": "\n".join(lines) + "\n"}


# --------------------------------------------------------------------------

def run_all(ctx: Context) -> Outputs:
    cfg = ctx.cfg
    out: Outputs = {}
    steps = [
        (cfg.urtest is not None, urtest),
        (any(m.calibration is not None for m in cfg.models.values()), calibrate),
        (bool(cfg.coint), coint),
        (bool(cfg.evaluate), evaluate),
        (cfg.forecast is not None, forecast),
        (cfg.plotdata is not None, plotdata),
        (cfg.montecarlo is not None, montecarlo),
    ]
    for enabled, fn in steps:
        if enabled:
            out.update(fn(ctx))
    manifest = {
        "config_sha256": cfg.digest(),
        "catalog_sha256": ctx.catalog.digest(),
        "seed": cfg.seed,
        "files": {k: hashlib.sha256(v.encode()).hexdigest() for k, v in sorted(out.items())},
    }
    out["manifest.json"] = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    return out


COMMANDS = {
    "urtest": urtest,
    "coint": coint,
    "calibrate": calibrate,
    "evaluate": evaluate,
    "forecast": forecast,
    "plotdata": plotdata,
    "montecarlo": montecarlo,
    "all": run_all,
}


def run_command(command: str, ctx: Context) -> Outputs:
    try:
        fn = COMMANDS[command]
    except KeyError:
        raise ConfigError(f"unknown command {command!r}") from None
    return fn(ctx)
