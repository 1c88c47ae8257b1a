"""Write the synthetic demo catalog to data/demo/.

Every series here is SIMULATED. The laws that generate inflation and
unemployment from the labour force are the published Swiss coefficients,
so the demo behaves like the real case, but none of the numbers are
observations. Use data/swiss/ for the real snapshot.

    python3 scripts/make_demo_data.py [--out data/demo] [--seed 20110601]
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np
import yaml

from lfinflation.ingest import write_series_csv
from lfinflation.lagmodel import GeneralizedModel, GeneralizedSegment, PiecewiseLagModel, Segment
from lfinflation.lagmodel import predict_generalized, predict_piecewise
from lfinflation.series import Frequency, Period, Series

FIRST, LAST = 1960, 2010

CPI_LAW = PiecewiseLagModel("LF", "CPI", (
    Segment(None, 1980, 1.9, 0.053, 1),
    Segment(1981, 1991, 1.3, 0.008, 1),
    Segment(1992, None, 0.5, 0.006, 1),
))
DGDP_LAW = PiecewiseLagModel("LF", "DGDP", (
    Segment(None, 1979, 1.9, 0.057, 2),
    Segment(1980, 1991, 0.5, 0.021, 2),
    Segment(1992, None, 0.5, 0.006, 2),
))
UE_LAW = PiecewiseLagModel("LF", "UE", (
    Segment(None, 1991, -0.1, 0.007, 0),
    Segment(1992, None, -0.5, 0.04, 0),
))
SCENARIOS = {
    # (growth in 2010, growth in 2050)
    "high_fertility": (0.009, 0.003),
    "middle_fertility": (0.007, 0.000),
    "low_fertility": (0.005, -0.004),
}


def _round(s: Series, digits: int) -> Series:
    return s.replace(values=np.round(s.values, digits))


def labour_force(rng: np.random.Generator) -> Series:
    years = np.arange(FIRST, LAST + 1)
    g = 0.012 + 0.012 * np.sin(2 * np.pi * (years - FIRST) / 17.0) + 0.006 * rng.standard_normal(years.size)
    g[years == 1991] += 0.07  # definition change
    g[0] = 0.0
    lf = 2.6e6 * np.cumprod(1.0 + g)
    return Series("LF", Frequency.ANNUAL, Period(FIRST), np.round(lf, -2), "persons")


def quarterly(annual: Series, rng: np.random.Generator, noise: float, id: str, units: str) -> Series:
    """Piecewise-linear interpolation of annual values onto quarters plus noise."""
    t_ann = annual.ordinals + 0.5
    q0 = Period(1975, 1)
    t_q = (np.arange(4 * (LAST - 1975 + 1)) + 0.5) / 4.0 + 1975
    v = np.interp(t_q, t_ann, annual.values)
    v = v * (1.0 + noise * rng.standard_normal(v.size)) if units == "persons" else v + noise * rng.standard_normal(v.size)
    return Series(id, Frequency.QUARTERLY, q0, v, units)


def scenario(lf: Series, name: str, lo: float, hi: float) -> Series:
    base_year = 2008
    years = np.arange(base_year, 2051)
    g = np.interp(years, [2010, 2050], [lo, hi])
    g[0] = 0.0
    level = lf[base_year] * np.cumprod(1.0 + g)
    return Series(name, Frequency.ANNUAL, Period(base_year), np.round(level, -2), "persons")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "data" / "demo")
    ap.add_argument("--seed", type=int, default=20110601)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    lf = labour_force(rng)
    cpi = predict_piecewise(CPI_LAW, lf).window(1961, LAST)
    cpi = cpi.replace(id="CPI", values=cpi.values + 0.012 * rng.standard_normal(len(cpi)), units="rate per year")
    dgdp = predict_piecewise(DGDP_LAW, lf).window(1971, LAST)
    dgdp = dgdp.replace(id="DGDP", values=dgdp.values + 0.010 * rng.standard_normal(len(dgdp)), units="rate per year")
    ue = predict_piecewise(UE_LAW, lf).window(1975, LAST)
    ue = ue.replace(id="UE", values=np.clip(ue.values + 0.002 * rng.standard_normal(len(ue)), 0.001, None),
                    units="fraction of labour force")
    lfq = quarterly(lf, rng, 0.002, "LFQ", "persons")
    dgdpq = quarterly(dgdp, rng, 0.004, "DGDPQ", "rate per quarter").window(Period(1980, 2), None)
    dgdpq = dgdpq.replace(values=dgdpq.values / 4.0)

    files = {"LF": (lf, 0), "CPI": (cpi, 6), "DGDP": (dgdp, 6), "UE": (ue, 5), "LFQ": (lfq, -1), "DGDPQ": (dgdpq, 6)}
    catalog = {
        "version": 1,
        "description": "SYNTHETIC demo data generated by scripts/make_demo_data.py; not observations.",
        "series": {},
        "scenarios": {},
    }
    for id, (s, digits) in files.items():
        write_series_csv(_round(s, digits), out / f"{id}.csv")
        catalog["series"][id] = {
            "path": f"{id}.csv",
            "frequency": s.frequency.value,
            "units": s.units,
            "source": "synthetic",
            "vintage": f"seed {args.seed}",
        }
    for name, (lo, hi) in SCENARIOS.items():
        s = scenario(lf, name, lo, hi)
        write_series_csv(s, out / f"scenario_{name}.csv")
        catalog["scenarios"][name] = {
            "path": f"scenario_{name}.csv",
            "frequency": "annual",
            "units": "persons",
            "source": "synthetic labour-force path",
            "vintage": f"seed {args.seed}",
        }
    (out / "catalog.yaml").write_text(yaml.safe_dump(catalog, sort_keys=False))
    print(f"wrote {len(files)} series and {len(SCENARIOS)} scenarios to {out}")


if __name__ == "__main__":
    main()
