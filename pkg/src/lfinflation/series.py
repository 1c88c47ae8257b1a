"""Frequency-tagged time series and the transforms the models consume.

Missing observations are stored as ``nan``; every transform propagates them
point-wise and never interpolates.
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DataError, SeriesWarning

__all__ = [
    "Frequency",
    "Period",
    "Series",
    "Aligned",
    "growth_rate",
    "diff",
    "moving_average",
    "cumulative",
    "lag_shift",
    "align",
    "stack",
]


class Frequency(str, enum.Enum):
    ANNUAL = "annual"
    QUARTERLY = "quarterly"

    @property
    def periods_per_year(self) -> int:
        return 1 if self is Frequency.ANNUAL else 4


_PERIOD_RE = re.compile(r"^\s*(\d{4})(?:Q([1-4]))?\s*$")


@dataclass(frozen=True, order=True)
class Period:
    year: int
    quarter: Optional[int] = None

    def __post_init__(self):
        if self.quarter is not None and not 1 <= self.quarter <= 4:
            raise ValueError(f"quarter must be in 1..4, got {self.quarter}")

    @property
    def frequency(self) -> Frequency:
        return Frequency.ANNUAL if self.quarter is None else Frequency.QUARTERLY

    @property
    def ordinal(self) -> int:
        if self.quarter is None:
            return self.year
        return 4 * self.year + self.quarter - 1

    @classmethod
    def from_ordinal(cls, ordinal: int, frequency: Frequency) -> "Period":
        if Frequency(frequency) is Frequency.ANNUAL:
            return cls(int(ordinal))
        year, q = divmod(int(ordinal), 4)
        return cls(year, q + 1)

    @classmethod
    def parse(cls, text) -> "Period":
        """Parse ``YYYY`` or ``YYYYQn``."""
        if isinstance(text, Period):
            return text
        if isinstance(text, int):
            return cls(text)
        m = _PERIOD_RE.match(str(text))
        if m is None:
            raise ValueError(f"cannot parse period {text!r}; expected YYYY or YYYYQn")
        q = m.group(2)
        return cls(int(m.group(1)), int(q) if q else None)

    def shift(self, k: int) -> "Period":
        return Period.from_ordinal(self.ordinal + k, self.frequency)

    def __str__(self) -> str:
        if self.quarter is None:
            return f"{self.year:04d}"
        return f"{self.year:04d}Q{self.quarter}"


@dataclass(frozen=True)
class Series:
    """Contiguous series of values starting at ``start``.

    ``values`` is stored as a read-only float array; ``nan`` marks a
    missing observation.
    """

    id: str
    frequency: Frequency
    start: Period
    values: np.ndarray = field(repr=False)
    units: str = ""

    def __post_init__(self):
        freq = Frequency(self.frequency)
        object.__setattr__(self, "frequency", freq)
        start = Period.parse(self.start)
        object.__setattr__(self, "start", start)
        if start.frequency is not freq:
            raise DataError(f"series {self.id!r}: start {start} does not match frequency {freq.value}")
        vals = np.array(self.values, dtype=float).reshape(-1)
        if vals.size < 1:
            raise DataError(f"series {self.id!r} is empty")
        if np.isinf(vals).any():
            raise DataError(f"series {self.id!r} contains non-finite values")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    @property
    def end(self) -> Period:
        return self.start.shift(len(self) - 1)

    @property
    def ordinals(self) -> np.ndarray:
        return np.arange(self.start.ordinal, self.start.ordinal + len(self))

    @property
    def periods(self) -> list[Period]:
        return [Period.from_ordinal(o, self.frequency) for o in self.ordinals]

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def index_of(self, period) -> int:
        p = Period.parse(period)
        if p.frequency is not self.frequency:
            raise DataError(f"period {p} has wrong frequency for series {self.id!r}")
        i = p.ordinal - self.start.ordinal
        if not 0 <= i < len(self):
            raise DataError(f"period {p} outside span {self.start}..{self.end} of {self.id!r}")
        return i

    def __getitem__(self, period) -> float:
        return float(self.values[self.index_of(period)])

    def covers(self, period) -> bool:
        p = Period.parse(period)
        return p.frequency is self.frequency and self.start.ordinal <= p.ordinal <= self.end.ordinal

    def replace(self, **changes) -> "Series":
        kw = dict(id=self.id, frequency=self.frequency, start=self.start, values=self.values, units=self.units)
        kw.update(changes)
        return Series(**kw)

    def window(self, start=None, end=None) -> "Series":
        """Restrict to ``[start, end]`` (inclusive), clipped to the span."""
        lo = self.start.ordinal if start is None else max(Period.parse(start).ordinal, self.start.ordinal)
        hi = self.end.ordinal if end is None else min(Period.parse(end).ordinal, self.end.ordinal)
        if hi < lo:
            raise DataError(f"window {start}..{end} does not intersect {self.id!r}")
        i0 = lo - self.start.ordinal
        return self.replace(start=Period.from_ordinal(lo, self.frequency), values=self.values[i0 : i0 + hi - lo + 1])

    @classmethod
    def from_pairs(cls, id: str, pairs: Iterable[tuple], units: str = "") -> "Series":
        """Build from ``(period, value)`` pairs which must be contiguous and ordered."""
        pairs = [(Period.parse(p), v) for p, v in pairs]
        if not pairs:
            raise DataError(f"series {id!r} is empty")
        freq = pairs[0][0].frequency
        for i, (p, _) in enumerate(pairs):
            if p.frequency is not freq:
                raise DataError(f"series {id!r}: mixed frequency at {p}")
            if p.ordinal != pairs[0][0].ordinal + i:
                raise DataError(f"series {id!r}: period {p} is not contiguous")
        values = [np.nan if v is None else float(v) for _, v in pairs]
        return cls(id, freq, pairs[0][0], values, units)


def _warn_missing(s: Series, op: str, positions: np.ndarray, start: Period, why: str) -> None:
    if positions.size:
        periods = ", ".join(str(start.shift(int(i))) for i in positions[:10])
        more = "" if positions.size <= 10 else f" (+{positions.size - 10} more)"
        warnings.warn(f"{op}({s.id}): {why} at {periods}{more}", SeriesWarning, stacklevel=3)


def growth_rate(s: Series) -> Series:
    """Period-over-period relative change ``(x_t - x_{t-1}) / x_{t-1}``."""
    if len(s) < 2:
        raise DataError(f"growth_rate needs at least 2 values, {s.id!r} has {len(s)}")
    prev, cur = s.values[:-1], s.values[1:]
    bad = np.isnan(prev) | np.isnan(cur) | (prev == 0)
    out = np.full(cur.shape, np.nan)
    ok = ~bad
    out[ok] = (cur[ok] - prev[ok]) / prev[ok]
    start = s.start.shift(1)
    _warn_missing(s, "growth_rate", np.flatnonzero(bad), start, "zero or missing operand")
    if np.isnan(out).all():
        raise DataError(f"growth_rate({s.id}) produced no valid values")
    return Series(f"g({s.id})", s.frequency, start, out, "rate per period")


def diff(s: Series) -> Series:
    if len(s) < 2:
        raise DataError(f"diff needs at least 2 values, {s.id!r} has {len(s)}")
    return Series(f"d({s.id})", s.frequency, s.start.shift(1), np.diff(s.values), s.units)


def moving_average(s: Series, k: int) -> Series:
    """Trailing k-period mean; the first output sits k-1 periods after ``s.start``."""
    if k < 1:
        raise ValueError("window length must be >= 1")
    if k > len(s):
        raise DataError(f"window {k} longer than series {s.id!r} ({len(s)})")
    if k == 1:
        return s.replace(id=f"ma1({s.id})")
    windows = np.lib.stride_tricks.sliding_window_view(s.values, k)
    out = windows.sum(axis=1) / k
    return Series(f"ma{k}({s.id})", s.frequency, s.start.shift(k - 1), out, s.units)


def cumulative(s: Series, base=None) -> Series:
    """Running sum from ``base`` (default: first period) onward."""
    i0 = 0 if base is None else s.index_of(base)
    return Series(f"cum({s.id})", s.frequency, s.start.shift(i0), np.cumsum(s.values[i0:]), s.units)


def lag_shift(s: Series, k: int) -> Series:
    """Reindex so that ``shifted(t) == s(t - k)``; negative ``k`` is a lead."""
    if abs(k) >= len(s):
        raise DataError(f"lag {k} too large for series {s.id!r} of length {len(s)}")
    return s.replace(start=s.start.shift(k))


@dataclass(frozen=True)
class Aligned:
    periods: tuple[Period, ...]
    a: np.ndarray
    b: np.ndarray

    def __len__(self) -> int:
        return len(self.periods)


def align(a: Series, b: Series) -> Aligned:
    """Pair the overlapping span of two series, dropping periods where either is missing."""
    if a.frequency is not b.frequency:
        raise DataError(f"cannot align {a.id!r} ({a.frequency.value}) with {b.id!r} ({b.frequency.value})")
    lo = max(a.start.ordinal, b.start.ordinal)
    hi = min(a.end.ordinal, b.end.ordinal)
    if hi < lo:
        raise DataError(f"{a.id!r} and {b.id!r} do not overlap")
    av = a.values[lo - a.start.ordinal : hi - a.start.ordinal + 1]
    bv = b.values[lo - b.start.ordinal : hi - b.start.ordinal + 1]
    keep = ~(np.isnan(av) | np.isnan(bv))
    if not keep.any():
        raise DataError(f"{a.id!r} and {b.id!r} have no jointly observed periods")
    periods = tuple(Period.from_ordinal(o, a.frequency) for o in np.arange(lo, hi + 1)[keep])
    return Aligned(periods, av[keep].copy(), bv[keep].copy())


def stack(series: Sequence[Series]) -> tuple[tuple[Period, ...], np.ndarray]:
    """Common span of several series as an (n, k) array.

    Leading and trailing periods with any missing value are trimmed; a gap
    inside the span is an error because callers need consecutive periods.
    """
    if not series:
        raise DataError("nothing to stack")
    freq = series[0].frequency
    if any(s.frequency is not freq for s in series):
        raise DataError("cannot stack series of different frequency")
    lo = max(s.start.ordinal for s in series)
    hi = min(s.end.ordinal for s in series)
    if hi < lo:
        raise DataError("series do not overlap")
    mat = np.column_stack([s.values[lo - s.start.ordinal : hi - s.start.ordinal + 1] for s in series])
    ok = np.flatnonzero(~np.isnan(mat).any(axis=1))
    if ok.size == 0:
        raise DataError("series have no jointly observed periods")
    i0, i1 = ok[0], ok[-1]
    if ok.size != i1 - i0 + 1:
        raise DataError("missing values inside the common span of " + ", ".join(repr(s.id) for s in series))
    periods = tuple(Period.from_ordinal(o, freq) for o in range(lo + i0, lo + i1 + 1))
    return periods, mat[i0 : i1 + 1]
