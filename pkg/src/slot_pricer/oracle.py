"""Brute-force references used to cross-check the solver.

Only :func:`verify_solver` calls into the solver; the enumeration and the
sampler work from region evaluation alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from slot_pricer.model import Instance, revenue_or_infeasible
from slot_pricer.solver import solve

DEFAULT_LIMIT = 10**6
TIE_TOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmax_profiles: tuple[tuple[float, ...], ...]
    profiles_evaluated: int


def enumerate_opt(instance: Instance, prices: Sequence[float], limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Evaluate every profile in ``prices ** n`` and keep all optima (ties within 1e-12)."""
    prices = sorted(set(float(p) for p in prices))
    count = len(prices) ** instance.n
    if count > limit:
        raise ValueError(f"enumeration of {count} profiles exceeds the limit of {limit}")
    best = -math.inf
    winners: list[tuple[float, ...]] = []
    for profile in itertools.product(prices, repeat=instance.n):
        value = revenue_or_infeasible(instance, profile)
        if value > best + TIE_TOL:
            best, winners = value, [profile]
        elif value > -math.inf and abs(value - best) <= TIE_TOL:
            winners.append(profile)
    return OracleResult(best, tuple(winners), count)


def monte_carlo_loads(instance: Instance, prices: Sequence[float], samples: int, seed: int) -> np.ndarray:
    """Estimate per-slot loads by letting sampled users pick their cheapest slot."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    s = instance.population.sample(samples, rng)
    costs = instance.total_costs(s, prices)
    choice = np.argmin(costs, axis=0)
    served = costs[choice, np.arange(samples)] <= 0
    counts = np.bincount(choice[served], minlength=instance.n)
    return counts * (instance.population.total_mass / samples)


def verify_solver(instance: Instance, prices: Sequence[float], limit: int = DEFAULT_LIMIT, tol: float = 1e-9) -> bool:
    expected = enumerate_opt(instance, prices, limit).value
    got = solve(instance, sorted(set(prices))).value
    if math.isinf(expected) or math.isinf(got):
        return expected == got
    return abs(expected - got) <= tol
