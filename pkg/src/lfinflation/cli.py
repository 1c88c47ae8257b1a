"""Command-line entry point.

    lfinflation COMMAND --config run.yaml --out results/ [--seed N] [--series ID[=PATH] ...]

COMMAND is one of urtest, coint, calibrate, evaluate, forecast, plotdata,
montecarlo, all. Exit codes: 0 success, 2 configuration error, 3 data
error, 4 numerical failure. On failure ``error.json`` is written to the
output directory and the same record is printed to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .config import check_references, load_config
from .errors import ConfigError, LfInflationError, NumericError
from .ingest import load_catalog
from .pipeline import COMMANDS, Context, run_command

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lfinflation", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, type=Path, help="run configuration (YAML, version 1)")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: ./out)")
    p.add_argument("--seed", type=int, default=None, help="override the config's Monte Carlo seed")
    p.add_argument(
        "--series",
        action="append",
        default=[],
        metavar="ID[=PATH]",
        help="ID restricts the analyses to those involving the series; ID=PATH reads that series from PATH",
    )
    return p


def _write(out_dir: Path, outputs: dict) -> None:
    for rel, text in outputs.items():
        path = out_dir / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _fail(out_dir: Path, command: str, exc: BaseException, code: int) -> int:
    record = {"command": command, "exit_code": code, "error": type(exc).__name__, "message": str(exc)}
    columns = getattr(exc, "columns", None)
    if columns:
        record["columns"] = list(columns)
    text = json.dumps(record, sort_keys=True)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "error.json").write_text(text + "\n")
    except OSError:
        pass
    print(text, file=sys.stderr)
    return code


def run(command: str, config: Path, out: Path, seed=None, series=()) -> int:
    try:
        if seed is not None and not 0 <= seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        cfg = load_config(config, seed)
        catalog = load_catalog(cfg.catalog)
        check_references(cfg, catalog)
        only = set()
        for item in series:
            if "=" in item:
                id, path = item.split("=", 1)
                catalog.override(id, path)
            else:
                catalog.entry(item)
                only.add(item)
        ctx = Context(cfg, catalog, frozenset(only) if only else None)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            outputs = run_command(command, ctx)
    except LfInflationError as exc:
        return _fail(out, command, exc, exc.exit_code)
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        return _fail(out, command, exc, NumericError.exit_code)
    except (ValueError, KeyError, TypeError) as exc:
        return _fail(out, command, exc, ConfigError.exit_code)
    _write(out, outputs)
    err = out / "error.json"
    if err.exists():
        err.unlink()
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args.command, args.config, args.out, args.seed, args.series)


if __name__ == "__main__":
    sys.exit(main())
