"""Synthetic inputs shared by several test modules."""

from __future__ import annotations

import numpy as np

from lfinflation.series import Frequency, Period, Series


def driver_growth(n: int = 42, seed: int = 2024) -> np.ndarray:
    """Labour-force growth with a slow cycle plus seeded noise."""
    t = np.arange(n)
    rng = np.random.default_rng(seed)
    return 0.01 + 0.03 * np.sin(2 * np.pi * t / 30) + 0.015 * rng.standard_normal(n)


def labour_force(n: int = 42, seed: int = 2024, start: int = 1965) -> Series:
    """Levels whose growth rate from the second period on is ``driver_growth``."""
    g = driver_growth(n, seed)
    g[0] = 0.0
    return Series("LF", Frequency.ANNUAL, Period(start), 4e6 * np.cumprod(1.0 + g), "persons")


def annual(values, start: int, id: str = "x") -> Series:
    return Series(id, Frequency.ANNUAL, Period(start), np.asarray(values, dtype=float))
