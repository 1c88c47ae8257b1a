"""Run configuration (YAML, format version 1).

Top-level keys::

    version: 1
    catalog: path/to/catalog.yaml     # relative to the config file
    seed: 12345                       # Monte Carlo master seed
    urtest:     {...}                 # unit-root battery
    models:     {name: {...}, ...}    # calibrated or fixed laws
    coint:      [{model: name, ...}]
    evaluate:   [{model: name, ...}]
    forecast:   {...}
    plotdata:   {...}
    montecarlo: {...}

See README.md for every field.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError
from .lagmodel import CalibrationConfig, Grid, model_from_dict, load_model
from .series import Period

__all__ = [
    "UrRow",
    "UrtestConfig",
    "ModelSpec",
    "CointConfig",
    "EvaluateConfig",
    "ForecastConfig",
    "PlotdataConfig",
    "MonteCarloConfig",
    "check_references",
    "RunConfig",
    "load_config",
    "parse_config",
]

CONFIG_VERSION = 1
TRANSFORM_STEPS = ("level", "diff", "growth_rate")


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return d[key]


def _period(v, where: str) -> Optional[Period]:
    if v is None:
        return None
    try:
        return Period.parse(v)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _grid(v, default: Grid, where: str) -> Grid:
    if v is None:
        return default
    if not (isinstance(v, (list, tuple)) and len(v) == 3):
        raise ConfigError(f"{where}: grid must be [lo, hi, step]")
    return Grid(*(float(x) for x in v))


@dataclass(frozen=True)
class UrRow:
    label: str
    series: str
    transform: tuple[str, ...] = ()


@dataclass(frozen=True)
class UrtestConfig:
    rows: tuple[UrRow, ...]
    deterministic: str = "constant"
    adf_lags: int = 0
    dfgls_lags: Optional[int] = None
    pp_bandwidth: Optional[int] = None
    table: str = "mackinnon"
    dfgls_deterministic: Optional[str] = None


@dataclass(frozen=True)
class ModelSpec:
    name: str
    kind: str
    response: str
    driver: Optional[str] = None
    ue: Optional[str] = None
    calibration: Optional[CalibrationConfig] = None
    fixed: object = None


@dataclass(frozen=True)
class CointConfig:
    model: str
    dfgls_lags: int = 4
    deterministic: str = "constant"
    max_lag: int = 2
    trend_specs: tuple[str, ...] = ("none", "rconstant")
    start: Optional[Period] = None
    end: Optional[Period] = None


@dataclass(frozen=True)
class EvaluateConfig:
    model: str
    presets: tuple[str, ...] = ("annual",)
    start: Optional[Period] = None
    end: Optional[Period] = None


@dataclass(frozen=True)
class ForecastConfig:
    inflation_model: str
    unemployment_model: Optional[str] = None
    start: Optional[Period] = None
    horizon_end: Period = Period(2050)
    scenarios: Optional[tuple[str, ...]] = None


@dataclass(frozen=True)
class PlotdataConfig:
    models: tuple[str, ...] = ()
    cumulative_base: Optional[Period] = None
    ma_window: int = 3
    smoothing: dict = field(default_factory=dict)  # model -> (observed window, predicted window)

    def windows(self, model: str) -> tuple[int, int]:
        return self.smoothing.get(model, (self.ma_window, self.ma_window))


@dataclass(frozen=True)
class MonteCarloConfig:
    replications: int = 500
    nobs: int = 100
    processes: tuple[tuple[str, float], ...] = (("random_walk", 1.0), ("ar1", 0.5))
    tests: tuple[str, ...] = ("ADF", "DFGLS", "PP")
    level: str = "5%"
    deterministic: str = "constant"


@dataclass(frozen=True)
class RunConfig:
    path: Path
    catalog: Path
    seed: int = 0
    urtest: Optional[UrtestConfig] = None
    models: dict = field(default_factory=dict)
    coint: tuple[CointConfig, ...] = ()
    evaluate: tuple[EvaluateConfig, ...] = ()
    forecast: Optional[ForecastConfig] = None
    plotdata: Optional[PlotdataConfig] = None
    montecarlo: Optional[MonteCarloConfig] = None
    raw: dict = field(default_factory=dict, repr=False)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form of the effective configuration."""
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    def model(self, name: str) -> ModelSpec:
        try:
            return self.models[name]
        except KeyError:
            raise ConfigError(f"model {name!r} is not defined in {self.path}") from None


def _urtest(raw: dict) -> UrtestConfig:
    rows = []
    for i, r in enumerate(_require(raw, "rows", "urtest")):
        where = f"urtest.rows[{i}]"
        tr = r.get("transform", [])
        tr = (tr,) if isinstance(tr, str) else tuple(tr)
        for step in tr:
            if step not in TRANSFORM_STEPS:
                raise ConfigError(f"{where}: unknown transform {step!r}")
        series = _require(r, "series", where)
        rows.append(UrRow(str(r.get("label", series)), str(series), tuple(s for s in tr if s != "level")))
    return UrtestConfig(
        tuple(rows),
        raw.get("deterministic", "constant"),
        int(raw.get("adf_lags", 0)),
        raw.get("dfgls_lags"),
        raw.get("pp_bandwidth"),
        raw.get("table", "mackinnon"),
        raw.get("dfgls_deterministic"),
    )


def _calibration(raw: dict, where: str) -> CalibrationConfig:
    d = CalibrationConfig()
    try:
        return CalibrationConfig(
            breakpoints=tuple(_period(p, where) for p in raw.get("breakpoints", [])),
            lags=tuple(raw.get("lags", d.lags)),
            slope_grid=_grid(raw.get("slope_grid"), d.slope_grid, where),
            intercept_grid=_grid(raw.get("intercept_grid"), d.intercept_grid, where),
            ue_slope_grid=_grid(raw.get("ue_slope_grid"), d.ue_slope_grid, where),
            ue_lags=tuple(raw.get("ue_lags", d.ue_lags)),
            refine=bool(raw.get("refine", True)),
            objective=raw.get("objective", d.objective),
            driver_transform=raw.get("transform", d.driver_transform),
            start=_period(raw.get("start"), where),
            end=_period(raw.get("end"), where),
            fixed_slopes=raw.get("fixed_slopes", {}),
            min_points=int(raw.get("min_points", d.min_points)),
        )
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _model(name: str, raw: dict, base: Path) -> ModelSpec:
    where = f"models.{name}"
    kind = raw.get("kind", "piecewise")
    if kind not in ("piecewise", "generalized"):
        raise ConfigError(f"{where}: unknown kind {kind!r}")
    fixed = None
    if "file" in raw:
        p = Path(raw["file"])
        fixed = load_model(p if p.is_absolute() else base / p)
    elif "segments" in raw:
        doc = {k: v for k, v in raw.items() if k not in ("kind", "transform")}
        doc["kind"] = kind
        if kind == "piecewise":
            doc.setdefault("driver_id", raw.get("driver"))
            doc.setdefault("response_id", raw.get("response"))
            doc["driver_transform"] = raw.get("transform", "growth_rate")
        else:
            doc.setdefault("lf_id", raw.get("lf"))
            doc.setdefault("ue_id", raw.get("ue"))
            doc.setdefault("response_id", raw.get("response"))
            doc["lf_transform"] = raw.get("transform", "growth_rate")
        try:
            fixed = model_from_dict(doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: bad segment list ({exc})") from None
    if kind == "piecewise":
        driver = raw.get("driver") or (fixed.driver_id if fixed is not None else None)
        response = raw.get("response") or (fixed.response_id if fixed is not None else None)
        if driver is None or response is None:
            raise ConfigError(f"{where}: piecewise models need 'driver' and 'response'")
        ue = None
    else:
        driver = raw.get("lf") or (fixed.lf_id if fixed is not None else None)
        ue = raw.get("ue") or (fixed.ue_id if fixed is not None else None)
        response = raw.get("response") or (fixed.response_id if fixed is not None else None)
        if driver is None or ue is None or response is None:
            raise ConfigError(f"{where}: generalized models need 'lf', 'ue' and 'response'")
    cal = None if fixed is not None else _calibration(raw, where)
    return ModelSpec(name, kind, str(response), str(driver), ue, cal, fixed)


def parse_config(raw: dict, path: Path) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: configuration must be a mapping")
    if raw.get("version") != CONFIG_VERSION:
        raise ConfigError(f"{path}: unsupported config version {raw.get('version')!r} (expected {CONFIG_VERSION})")
    base = path.parent
    cat = Path(_require(raw, "catalog", str(path)))
    models = {str(k): _model(str(k), v or {}, base) for k, v in (raw.get("models") or {}).items()}

    def ref(name, where):
        if name not in models:
            raise ConfigError(f"{where}: unknown model {name!r}")
        return name

    coint = tuple(
        CointConfig(
            ref(c["model"], "coint"),
            int(c.get("dfgls_lags", 4)),
            c.get("deterministic", "constant"),
            int(c.get("max_lag", 2)),
            tuple(c.get("trend_specs", ("none", "rconstant"))),
            _period(c.get("start"), "coint"),
            _period(c.get("end"), "coint"),
        )
        for c in raw.get("coint") or []
    )
    evaluate = tuple(
        EvaluateConfig(
            ref(e["model"], "evaluate"),
            tuple(e.get("presets", ("annual",))),
            _period(e.get("start"), "evaluate"),
            _period(e.get("end"), "evaluate"),
        )
        for e in raw.get("evaluate") or []
    )
    fc = raw.get("forecast")
    forecast = None
    if fc:
        forecast = ForecastConfig(
            ref(_require(fc, "inflation_model", "forecast"), "forecast"),
            ref(fc["unemployment_model"], "forecast") if fc.get("unemployment_model") else None,
            _period(fc.get("start"), "forecast"),
            _period(fc.get("horizon_end", 2050), "forecast"),
            tuple(fc["scenarios"]) if fc.get("scenarios") else None,
        )
    pd_raw = raw.get("plotdata")
    plotdata = None
    if pd_raw is not None:
        plotdata = PlotdataConfig(
            tuple(ref(m, "plotdata") for m in pd_raw.get("models", list(models))),
            _period(pd_raw.get("cumulative_base"), "plotdata"),
            int(pd_raw.get("ma_window", 3)),
            {
                ref(m, "plotdata.smoothing"): (int(w.get("observed", 1)), int(w.get("predicted", 1)))
                for m, w in (pd_raw.get("smoothing") or {}).items()
            },
        )
    mc_raw = raw.get("montecarlo")
    mc = None
    if mc_raw is not None:
        procs = tuple((str(p["name"]), float(p.get("phi", 1.0))) for p in mc_raw.get("processes", []))
        mc = MonteCarloConfig(
            int(mc_raw.get("replications", 500)),
            int(mc_raw.get("nobs", 100)),
            procs or MonteCarloConfig.processes,
            tuple(mc_raw.get("tests", MonteCarloConfig.tests)),
            str(mc_raw.get("level", "5%")),
            mc_raw.get("deterministic", "constant"),
        )
    return RunConfig(
        path,
        cat if cat.is_absolute() else base / cat,
        int(raw.get("seed", 0)),
        _urtest(raw["urtest"]) if raw.get("urtest") else None,
        models,
        coint,
        evaluate,
        forecast,
        plotdata,
        mc,
        raw,
    )


def load_config(path, seed: Optional[int] = None) -> RunConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if seed is not None and isinstance(raw, dict):
        raw = {**raw, "seed": int(seed)}
    return parse_config(raw, path)


def check_references(cfg: RunConfig, catalog) -> None:
    """Fail early when the config names a series or scenario the catalog lacks."""
    missing = []
    for row in cfg.urtest.rows if cfg.urtest else ():
        if row.series not in catalog.series:
            missing.append(f"urtest row {row.label!r}: series {row.series!r}")
    for m in cfg.models.values():
        for id in (m.driver, m.response, m.ue):
            if id is not None and id not in catalog.series:
                missing.append(f"models.{m.name}: series {id!r}")
    if cfg.forecast and cfg.forecast.scenarios:
        for name in cfg.forecast.scenarios:
            if name not in catalog.scenarios:
                missing.append(f"forecast: scenario {name!r}")
    if missing:
        raise ConfigError(f"not in catalog {catalog.path}: " + "; ".join(missing))
