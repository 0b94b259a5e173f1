"""Certified bounds for real-valued prices via a price grid of step ``delta``.

The lower bound is the exact optimum over the grid. The upper bound solves a
relaxed grid problem (prices rounded down, each unit sold at ``q + delta``,
capacities widened) and adds ``n * mu_upper * L * delta * p_max``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from slot_pricer.errors import ModeError
from slot_pricer.model import Instance, grid_between, price_bounds, price_grid
from slot_pricer.solver import EXACT, Relaxed, solve


@dataclass(frozen=True)
class ContinuousConstants:
    alpha: float
    mu_upper: float
    L: float
    p_min: float
    p_max: float

    @property
    def delta_max(self) -> float:
        """Step size above which the rate analysis no longer applies (``8 / (L^2 alpha)``)."""
        if self.L == 0:
            return math.inf
        return 8.0 / (self.L**2 * self.alpha)


@dataclass(frozen=True)
class BoundReport:
    delta: float
    lb: float
    lb_profile: tuple[float, ...] | None
    ub_raw: float
    ub: float
    ub_profile: tuple[float, ...] | None

    @property
    def gap(self) -> float:
        return self.ub - self.lb


def derive_constants(instance: Instance) -> ContinuousConstants:
    alpha = instance.distance.strong_convexity
    if alpha is None:
        raise ModeError(f"strong convexity required for continuous bounds ({instance.distance.family} is not)")
    if not instance.population.continuous_eligible:
        raise ModeError("continuous bounds need a density bounded away from zero on its support")
    t = instance.times
    L = 2.0 * max((1.0 / (alpha * (b - a)) for a, b in zip(t, t[1:])), default=0.0)
    p_min, p_max = price_bounds(instance)
    return ContinuousConstants(alpha, instance.population.bounds()[1], L, p_min, p_max)


def relaxed_capacity(constants: ContinuousConstants, nu: float, delta: float) -> float:
    return nu + _capacity_slack(constants, delta)


def _capacity_slack(constants: ContinuousConstants, delta: float) -> float:
    mu = constants.mu_upper
    return mu * constants.L * delta + 2.0 * mu * math.sqrt(2.0 * delta / constants.alpha)


def lower_bound(instance: Instance, delta: float) -> tuple[float, tuple[float, ...] | None]:
    result = solve(instance, price_grid(instance, delta), EXACT)
    return result.value, result.profile


def upper_bound_grid(constants: ContinuousConstants, delta: float) -> list[float]:
    lo = math.floor(constants.p_min / delta) * delta - delta
    return grid_between(lo, constants.p_max + delta, delta)


def upper_bound(instance: Instance, delta: float) -> tuple[float, float, tuple[float, ...] | None]:
    """``(ub_raw, ub, profile)`` where ``ub = ub_raw + n * mu_upper * L * delta * p_max``."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    constants = derive_constants(instance)
    mode = Relaxed(delta, _capacity_slack(constants, delta))
    result = solve(instance, upper_bound_grid(constants, delta), mode)
    correction = instance.n * constants.mu_upper * constants.L * delta * constants.p_max
    return result.value, result.value + correction, result.profile


def bound_report(instance: Instance, delta: float) -> BoundReport:
    lb, lb_profile = lower_bound(instance, delta)
    ub_raw, ub, ub_profile = upper_bound(instance, delta)
    return BoundReport(delta, lb, lb_profile, ub_raw, ub, ub_profile)


def gap_sweep(instance: Instance, deltas: Sequence[float], threads: int = 1) -> list[BoundReport]:
    """One report per step size; each solve is independent, so order never depends on ``threads``."""
    if not deltas:
        return []
    derive_constants(instance)
    if threads <= 1:
        return [bound_report(instance, d) for d in deltas]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda d: bound_report(instance, d), deltas))
