"""Seeded data generators and rejection-frequency harnesses for size/power checks.

Trial ``i`` of a run seeded with ``seed`` draws from
``numpy.random.default_rng([seed, i])``, so any trial can be reproduced on
its own and trials can be evaluated in any order.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["trial_rng", "random_walk", "ar1", "cointegrated_pair", "rejection_frequency"]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def random_walk(nobs: int, rng: np.random.Generator) -> np.ndarray:
    return np.cumsum(rng.standard_normal(nobs))


def ar1(nobs: int, phi: float, rng: np.random.Generator, burn: int = 100) -> np.ndarray:
    e = rng.standard_normal(nobs + burn)
    x = np.empty_like(e)
    x[0] = e[0]
    for t in range(1, e.size):
        x[t] = phi * x[t - 1] + e[t]
    return x[burn:]


def cointegrated_pair(nobs: int, rng: np.random.Generator, beta: float = 2.0, noise: float = 1.0) -> np.ndarray:
    """``y1`` a random walk and ``y2 = beta * y1 + white noise``."""
    y1 = random_walk(nobs, rng)
    y2 = beta * y1 + noise * rng.standard_normal(nobs)
    return np.column_stack([y1, y2])


def rejection_frequency(
    statistic_rejects: Callable[[np.ndarray], bool],
    generate: Callable[[np.random.Generator], np.ndarray],
    replications: int,
    seed: int,
) -> float:
    """Share of ``replications`` seeded trials in which the test rejects."""
    hits = 0
    for i in range(replications):
        hits += bool(statistic_rejects(generate(trial_rng(seed, i))))
    return hits / replications
