"""Problem instances, user-choice regions and revenue evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from slot_pricer.distance import Distance
from slot_pricer.errors import ValidationError
from slot_pricer.interval import Interval
from slot_pricer.measure import DensityModel

CAPACITY_SLACK = 1e-12
GRID_SNAP = 1e-9


@dataclass(frozen=True)
class Instance:
    distance: Distance
    times: tuple[float, ...]
    capacities: tuple[float, ...]
    population: DensityModel

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.times)
        caps = tuple(float(c) for c in self.capacities)
        if not times:
            raise ValidationError("slots: at least one slot is required", ("slots",))
        if len(times) != len(caps):
            raise ValidationError("slots: times and capacities differ in length", ("slots",))
        for j, t in enumerate(times):
            if not math.isfinite(t):
                raise ValidationError(f"slots[{j}].t: slot time must be finite", ("slots", j, "t"))
            if j and t <= times[j - 1]:
                raise ValidationError(
                    f"slots[{j}].t: slot times must be strictly increasing ({t!r} follows {times[j - 1]!r})",
                    ("slots", j, "t"),
                )
        for j, c in enumerate(caps):
            if not c >= 0:
                raise ValidationError(
                    f"slots[{j}].capacity: capacity must be nonnegative, got {c!r}", ("slots", j, "capacity")
                )
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "capacities", caps)

    @property
    def n(self) -> int:
        return len(self.times)

    def sigma(self, i: int, j: int, q):
        """Boundary between slots ``i < j`` (0-based) for price difference ``q = p_j - p_i``."""
        return self.distance.diff_inverse(self.times[i], self.times[j], q)

    def total_costs(self, s, prices: Sequence[float]) -> np.ndarray:
        """``d(s - t_j) + p_j`` for every slot, stacked along the first axis."""
        s = np.asarray(s, dtype=float)
        return np.stack([self.distance(s - t) + p for t, p in zip(self.times, prices)])


@dataclass(frozen=True)
class SlotRegion:
    envelope: Interval
    served: Interval
    load: float
    capacity: float
    capacity_ok: bool


@dataclass(frozen=True)
class RegionReport:
    prices: tuple[float, ...]
    slots: tuple[SlotRegion, ...]
    revenue: float
    feasible: bool

    @property
    def loads(self) -> tuple[float, ...]:
        return tuple(s.load for s in self.slots)


def envelope_regions(instance: Instance, prices: Sequence[float]) -> list[Interval]:
    """Regions of the lower envelope of ``d(x - t_j) + p_j``, zero-length ones dropped."""
    n = instance.n
    out = []
    for j in range(n):
        lo = max((instance.sigma(k, j, prices[j] - prices[k]) for k in range(j)), default=-math.inf)
        hi = min((instance.sigma(j, k, prices[k] - prices[j]) for k in range(j + 1, n)), default=math.inf)
        out.append(Interval(lo, hi) if lo < hi else Interval.empty())
    return out


def compute_regions(instance: Instance, prices: Sequence[float]) -> RegionReport:
    prices = tuple(float(p) for p in prices)
    if len(prices) != instance.n:
        raise ValueError(f"profile has {len(prices)} prices for {instance.n} slots")
    slots = []
    revenue = 0.0
    for j, env in enumerate(envelope_regions(instance, prices)):
        served = env.intersect(instance.distance.sublevel_interval(instance.times[j], prices[j]))
        load = instance.population.mass_of(served)
        cap = instance.capacities[j]
        slots.append(SlotRegion(env, served, load, cap, load <= cap + CAPACITY_SLACK))
        revenue += prices[j] * load
    return RegionReport(prices, tuple(slots), revenue, all(s.capacity_ok for s in slots))


def revenue_or_infeasible(instance: Instance, prices: Sequence[float]) -> float:
    report = compute_regions(instance, prices)
    return report.revenue if report.feasible else -math.inf


def price_bounds(instance: Instance) -> tuple[float, float]:
    """``(p_min, p_max)``: every optimum over the reals lies in this box."""
    d = instance.distance
    p_max = -d.minimum
    supp = instance.population.support()
    p_min = min(p_max, 0.0)
    for j, tj in enumerate(instance.times):
        for k, tk in enumerate(instance.times):
            if j < k:
                p_min = min(p_min, d.diff(supp.lo, tj, tk))
            elif j > k:
                p_min = min(p_min, d.diff(supp.hi, tj, tk))
    return float(p_min), float(p_max)


def _snapped(r: float, rounding) -> int:
    k = round(r)
    if abs(r - k) <= GRID_SNAP:
        return int(k)
    return int(rounding(r))


def grid_between(lo: float, hi: float, delta: float, *, include_hi: bool = True) -> list[float]:
    """Multiples ``k * delta`` in ``[lo, hi]`` (or ``[lo, hi)``), built by integer multiplication."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    k_lo = _snapped(lo / delta, math.ceil)
    k_hi = _snapped(hi / delta, math.floor)
    if not include_hi and k_hi * delta >= hi - GRID_SNAP * delta:
        k_hi -= 1
    return [k * delta for k in range(k_lo, k_hi + 1)]


def price_grid(instance: Instance, delta: float) -> list[float]:
    """Multiples of ``delta`` in ``[p_min, p_max + delta)``."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    p_min, p_max = price_bounds(instance)
    return grid_between(p_min, p_max + delta, delta, include_hi=False)


def round_down(prices: Sequence[float], delta: float) -> tuple[float, ...]:
    """Coordinate-wise ``floor(p / delta) * delta``; grid points map to themselves exactly."""
    return tuple(_snapped(p / delta, math.floor) * delta for p in prices)
