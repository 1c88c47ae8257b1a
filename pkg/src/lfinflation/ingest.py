"""Series CSV files and the data catalog.

CSV contract: header ``period,value``; one record per line; ``period`` is
``YYYY`` or ``YYYYQn``; ``value`` uses a decimal point with no thousands
separators; an empty value field marks a missing observation. Periods must
be strictly increasing and contiguous.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigError, DataError
from .series import Frequency, Period, Series

__all__ = ["ingest", "format_series_csv", "write_series_csv", "CatalogEntry", "DataCatalog", "load_catalog"]

HEADER = "period,value"


def ingest(path, id: Optional[str] = None, units: str = "", frequency=None) -> Series:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise DataError(f"{path}: empty file")
    if lines[0].strip() != HEADER:
        raise DataError(f"{path}:1: expected header {HEADER!r}, got {lines[0]!r}")
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected 2 fields, got {len(parts)}")
        try:
            period = Period.parse(parts[0])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: {exc}") from None
        raw = parts[1].strip()
        if raw == "":
            value = None
        else:
            try:
                value = float(raw)
            except ValueError:
                raise DataError(f"{path}:{lineno}: malformed value {raw!r}") from None
            if not math.isfinite(value):
                raise DataError(f"{path}:{lineno}: non-finite value {raw!r}")
        if pairs:
            prev = pairs[-1][0]
            if period.frequency is not prev.frequency:
                raise DataError(f"{path}:{lineno}: mixed frequency ({prev} then {period})")
            if period == prev:
                raise DataError(f"{path}:{lineno}: duplicate period {period}")
            if period.ordinal < prev.ordinal:
                raise DataError(f"{path}:{lineno}: period {period} out of order after {prev}")
            if period.ordinal != prev.ordinal + 1:
                raise DataError(f"{path}:{lineno}: gap between {prev} and {period}; encode missing values as empty fields")
        pairs.append((period, value))
    if not pairs:
        raise DataError(f"{path}: no data rows")
    s = Series.from_pairs(id or path.stem, pairs, units)
    if frequency is not None and s.frequency is not Frequency(frequency):
        raise DataError(f"{path}: declared {Frequency(frequency).value} but file holds {s.frequency.value} data")
    return s


def format_series_csv(s: Series) -> str:
    rows = [HEADER]
    for p, v in zip(s.periods, s.values):
        rows.append(f"{p},{'' if math.isnan(v) else repr(float(v))}")
    return "\n".join(rows) + "\n"


def write_series_csv(s: Series, path) -> None:
    Path(path).write_text(format_series_csv(s))


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    path: Path
    frequency: Frequency
    units: str = ""
    source: str = ""
    vintage: str = ""

    def load(self) -> Series:
        return ingest(self.path, self.id, self.units, self.frequency)


@dataclass
class DataCatalog:
    path: Path
    series: dict = field(default_factory=dict)
    scenarios: dict = field(default_factory=dict)
    description: str = ""

    def entry(self, id: str) -> CatalogEntry:
        try:
            return self.series[id]
        except KeyError:
            raise ConfigError(f"series {id!r} is not in catalog {self.path}") from None

    def load(self, id: str) -> Series:
        return self.entry(id).load()

    def load_scenario(self, name: str) -> Series:
        try:
            return self.scenarios[name].load()
        except KeyError:
            raise ConfigError(f"scenario {name!r} is not in catalog {self.path}") from None

    def override(self, id: str, path) -> None:
        e = self.entry(id)
        self.series[id] = CatalogEntry(e.id, Path(path), e.frequency, e.units, e.source, e.vintage)

    def digest(self) -> str:
        """SHA-256 over the catalog file and every referenced data file."""
        h = hashlib.sha256()
        h.update(self.path.read_bytes())
        for group in (self.series, self.scenarios):
            for key in sorted(group):
                e = group[key]
                h.update(key.encode())
                if e.path.exists():
                    h.update(e.path.read_bytes())
        return h.hexdigest()


def _entries(raw: dict, base: Path, where: str) -> dict:
    out = {}
    for id, spec in (raw or {}).items():
        if not isinstance(spec, dict) or "path" not in spec:
            raise ConfigError(f"catalog {where} entry {id!r} needs a 'path'")
        try:
            freq = Frequency(spec.get("frequency", "annual"))
        except ValueError:
            raise ConfigError(f"catalog entry {id!r}: unknown frequency {spec.get('frequency')!r}") from None
        p = Path(spec["path"])
        out[str(id)] = CatalogEntry(
            str(id),
            p if p.is_absolute() else base / p,
            freq,
            str(spec.get("units", "")),
            str(spec.get("source", "")),
            str(spec.get("vintage", "")),
        )
    return out


def load_catalog(path) -> DataCatalog:
    """Read a YAML catalog (format version 1). Relative paths resolve against the catalog's directory."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read catalog {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"catalog {path} must be a mapping")
    if raw.get("version") != 1:
        raise ConfigError(f"catalog {path}: unsupported version {raw.get('version')!r}")
    base = path.parent
    cat = DataCatalog(
        path,
        _entries(raw.get("series"), base, "series"),
        _entries(raw.get("scenarios"), base, "scenarios"),
        str(raw.get("description", "")),
    )
    overlap = set(cat.series) & set(cat.scenarios)
    if overlap:
        raise ConfigError(f"catalog ids used twice: {sorted(overlap)}")
    return cat
