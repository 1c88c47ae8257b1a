"""Monte Carlo size and power table for the ADF, DF-GLS and PP tests.

Size is the rejection rate under a Gaussian random walk; power is the rate
under a stationary AR(1). Every replication draws from its own seeded stream.

    python3 scripts/size_power.py [--reps 500] [--seed 1] [--level 5%] [--nobs 50 100 200]
"""

from __future__ import annotations

import argparse

from lfinflation import simulate
from lfinflation.unitroot import UnitRootSpec, adf_test, dfgls_test, pp_test

TESTS = {
    "ADF": lambda x, lv: adf_test(x, UnitRootSpec("ADF", "constant", 0)).reject_at[lv],
    "DF-GLS(0)": lambda x, lv: dfgls_test(x, UnitRootSpec("DFGLS", "constant", 0)).reject_at[lv],
    "DF-GLS(2)": lambda x, lv: dfgls_test(x, UnitRootSpec("DFGLS", "constant", 2)).reject_at[lv],
    "PP z(t)": lambda x, lv: pp_test(x, UnitRootSpec("PP", "constant")).z_tau.reject_at[lv],
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--level", default="5%", choices=["1%", "5%", "10%"])
    ap.add_argument("--phi", type=float, default=0.5, help="AR(1) coefficient under the alternative")
    ap.add_argument("--nobs", type=int, nargs="+", default=[50, 100, 200])
    args = ap.parse_args()

    print(f"{'test':<10} {'T':>5} {'size':>7} {'power':>7}   ({args.reps} reps, {args.level}, phi={args.phi})")
    for name, rejects in TESTS.items():
        for n in args.nobs:
            size = simulate.rejection_frequency(lambda x: rejects(x, args.level),
                                                lambda r: simulate.random_walk(n, r), args.reps, args.seed)
            power = simulate.rejection_frequency(lambda x: rejects(x, args.level),
                                                 lambda r: simulate.ar1(n, args.phi, r), args.reps, args.seed + 1)
            print(f"{name:<10} {n:>5} {size:>7.3f} {power:>7.3f}")


if __name__ == "__main__":
    main()
