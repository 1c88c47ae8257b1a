"""Headline Swiss results next to their published reference values.

Runs the CPI calibration, fit evaluation, cointegration tests and scenario
projections for a config, then prints one row per quantity with the
reference band and whether the value lands in it. With configs/demo.yaml
the numbers come from simulated data and only show that the pipeline runs.

    python3 scripts/replicate.py [--config configs/swiss.yaml]
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from lfinflation.cointegration import engle_granger, johansen
from lfinflation.config import check_references, load_config
from lfinflation.errors import LfInflationError
from lfinflation.evaluate import evaluate
from lfinflation.ingest import load_catalog
from lfinflation.pipeline import Context, forecast_results
from lfinflation.series import stack

ROOT = Path(__file__).resolve().parents[1]


def rows(ctx: Context):
    seg = ctx.fitted("cpi").model.segments[-1]
    obs, pred = ctx.observed("cpi"), ctx.prediction("cpi")
    ann = evaluate(obs, pred, "annual", 1971, 2009)
    ma3 = evaluate(obs, pred, "ma3", 1971, 2010)
    _, Y = stack([obs.window(1967, 2010), pred.window(1967, 2010)])
    adf = engle_granger(Y[:, 0] - Y[:, 1]).residual_tests[0]
    jo = johansen(Y, max_lag=2, trend_spec="none")
    paths = forecast_results(ctx)
    cpi_max = max(float(np.max(r.inflation_path.window(2010, 2050).values)) for r in paths)
    ue = np.concatenate([r.unemployment_path.window(2010, 2050).values for r in paths])
    return [
        ("post-1991 lag", seg.lag, 1, 1),
        ("post-1991 slope", seg.slope, 0.3, 0.7),
        ("post-1991 intercept", seg.intercept, 0.003, 0.009),
        ("R2 annual 1971-2009", ann.r2_annual, 0.5, 1.0),
        ("RMSFE 1971-2009", ann.rmsfe, 0.0, 0.025),
        ("R2 MA(3) 1971-2010", ma3.r2_annual, 0.7, 1.0),
        ("residual ADF t", adf.statistic, -np.inf, adf.critical_values["1%"]),
        ("Johansen rank (none)", jo.selected_rank, 1, 1),
        ("Johansen trace r=0", jo.trace_stats[0], 26.7, 42.7),
        ("max projected CPI", cpi_max, -np.inf, 0.01),
        ("min projected UE", float(ue.min()), 0.035, 0.055),
        ("max projected UE", float(ue.max()), 0.035, 0.055),
    ]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", type=Path, default=ROOT / "configs" / "swiss.yaml")
    args = ap.parse_args()
    warnings.simplefilter("ignore")
    try:
        cfg = load_config(args.config)
        catalog = load_catalog(cfg.catalog)
        check_references(cfg, catalog)
        table = rows(Context(cfg, catalog))
    except LfInflationError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    misses = 0
    print(f"{'quantity':<24} {'value':>10}   {'band':<20} ok")
    for name, v, lo, hi in table:
        ok = lo <= v <= hi
        misses += not ok
        print(f"{name:<24} {v:>10.4g}   [{lo:.4g}, {hi:.4g}]".ljust(58) + (" yes" if ok else " NO"))
    print(f"{len(table) - misses}/{len(table)} within band")
    return 0


if __name__ == "__main__":
    sys.exit(main())
