"""Seeded random instances for regression and property tests."""

from __future__ import annotations

import numpy as np

from slot_pricer.distance import HyperbolicOffset, QuadraticOffset
from slot_pricer.measure import DensityModel
from slot_pricer.model import Instance


def _times(rng: np.random.Generator, n: int, lo: float, hi: float, min_gap: float) -> tuple[float, ...]:
    while True:
        t = np.sort(rng.uniform(lo, hi, n))
        if n == 1 or np.min(np.diff(t)) >= min_gap:
            return tuple(float(v) for v in t)


def _density(rng: np.random.Generator, lo: float, hi: float, pieces: int, rho: tuple[float, float]) -> DensityModel:
    inner = np.sort(rng.uniform(lo, hi, pieces - 1))
    breaks = np.concatenate(([lo], inner, [hi]))
    if np.any(np.diff(breaks) <= 1e-6):
        return DensityModel((lo, hi), (float(rng.uniform(*rho)),))
    return DensityModel(tuple(breaks), tuple(rng.uniform(*rho, pieces)))


def regression_instance(rng: np.random.Generator, family: str = "quadratic", n: int | None = None) -> Instance:
    """Slots in [0, 10] at least 0.5 apart, 1-4 density pieces, capacities up to the total mass."""
    n = int(rng.integers(2, 4)) if n is None else n
    t = _times(rng, n, 0.0, 10.0, 0.5)
    a = float(rng.uniform(0.2, 2.0))
    if family == "quadratic":
        dist = QuadraticOffset(a, float(rng.uniform(-2.0, -0.1)))
    else:
        # offset chosen so that -d(0) lands in [0.1, 2]
        dist = HyperbolicOffset(a, -a - float(rng.uniform(0.1, 2.0)))
    pop = _density(rng, t[0] - 2.0, t[-1] + 2.0, int(rng.integers(1, 5)), (0.1, 1.0))
    caps = tuple(rng.uniform(0.0, pop.total_mass, n))
    return Instance(dist, t, caps, pop)


def random_prices(rng: np.random.Generator, instance: Instance, size: int) -> list[float]:
    """Distinct prices drawn around the break-even price ``-d(0)``."""
    p_max = -instance.distance.minimum
    prices: set[float] = set()
    while len(prices) < size:
        prices.add(round(float(rng.uniform(p_max - 3.0, p_max + 0.5)), 3))
    return sorted(prices)


def compact_instance(rng: np.random.Generator, n: int | None = None) -> Instance:
    """Strongly convex instance with a short price range, sized for fine price grids."""
    n = int(rng.integers(2, 4)) if n is None else n
    t = _times(rng, n, 0.0, 1.5, 0.3)
    dist = QuadraticOffset(float(rng.uniform(0.5, 1.5)), float(rng.uniform(-1.5, -0.5)))
    pop = _density(rng, t[0] - 0.5, t[-1] + 0.5, int(rng.integers(1, 4)), (0.2, 1.0))
    caps = tuple(rng.uniform(0.2, 0.8, n) * pop.total_mass)
    return Instance(dist, t, caps, pop)
