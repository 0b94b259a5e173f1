"""Exact optimisation over a finite price set.

Price profiles correspond to source-to-sink paths in a digraph whose
internal vertices are ``(slot, price)`` pairs. A slot's revenue depends on
the boundaries shared with both of its neighbours on the path, so rewards sit
on pairs of consecutive arcs (the arcs of the line digraph). The line digraph
is never built: the longest-path recurrence runs over the arcs of the base
digraph, with one value per arc.

Slot numbers in this module are 1-based, with 0 for the source and ``n + 1``
for the sink, to match :class:`Vertex`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from slot_pricer.model import CAPACITY_SLACK, Instance, compute_regions

COVER_SLACK = 1e-12


@dataclass(frozen=True)
class Exact:
    """Rewards ``q * v`` against the true capacities."""


@dataclass(frozen=True)
class Relaxed:
    """Rewards ``(q + delta) * v`` against capacities raised by ``extra_capacity``."""

    delta: float
    extra_capacity: float


Mode = Union[Exact, Relaxed]
EXACT = Exact()


@dataclass(frozen=True, order=True)
class Vertex:
    slot: int
    price: float | None = None

    def __str__(self) -> str:
        return f"({self.slot},{'.' if self.price is None else repr(self.price)})"


class ArcClass(enum.IntEnum):
    A1 = 1  # from the source
    A2 = 2  # between two slots
    A3 = 3  # into the sink


@dataclass(frozen=True)
class Arc:
    tail: Vertex
    head: Vertex
    kind: ArcClass
    boundary: float


@dataclass
class PricingGraph:
    n: int
    prices: tuple[float, ...]
    tail_slot: np.ndarray
    tail_pidx: np.ndarray
    head_slot: np.ndarray
    head_pidx: np.ndarray
    kind: np.ndarray
    boundary: np.ndarray

    @property
    def max_price(self) -> float:
        return self.prices[-1]

    def __len__(self) -> int:
        return len(self.kind)

    def vertex(self, slot: int, pidx: int) -> Vertex:
        if pidx < 0:
            return Vertex(slot)
        return Vertex(slot, self.prices[pidx])

    def arc(self, k: int) -> Arc:
        return Arc(
            self.vertex(int(self.tail_slot[k]), int(self.tail_pidx[k])),
            self.vertex(int(self.head_slot[k]), int(self.head_pidx[k])),
            ArcClass(int(self.kind[k])),
            float(self.boundary[k]),
        )

    def arcs(self) -> list[Arc]:
        return [self.arc(k) for k in range(len(self))]


@dataclass(frozen=True)
class SolveResult:
    value: float
    path: tuple[Vertex, ...]
    profile: tuple[float, ...] | None
    loads: tuple[float, ...] | None
    transitions: int
    arcs: int

    @property
    def feasible(self) -> bool:
        return self.value > -math.inf


def _check_prices(prices: Sequence[float]) -> tuple[float, ...]:
    prices = tuple(float(p) for p in prices)
    if not prices:
        raise ValueError("price set must be non-empty")
    if any(b <= a for a, b in zip(prices, prices[1:])):
        raise ValueError("price set must be sorted and distinct")
    return prices


def covered(instance: Instance, ell: int, by: tuple[int, float], at: float, max_price: float) -> bool:
    """Whether slot ``ell`` priced at ``max_price`` is weakly dominated by ``by = (i, q)`` at ``at``.

    ``at`` may be ``-inf`` or ``+inf``, in which case the limit of the cost
    difference is compared instead.
    """
    i, q = by
    d, t = instance.distance, instance.times
    if math.isinf(at):
        return d.diff_limit(t[i - 1], t[ell - 1], at) <= max_price - q + COVER_SLACK
    return d(at - t[i - 1]) + q <= d(at - t[ell - 1]) + max_price + COVER_SLACK


def _limit_threshold(instance: Instance, j: int, others: range, direction: float, max_price: float) -> float:
    """Largest ``q`` such that ``(j, q)`` covers every slot in ``others`` at ``direction``."""
    d, t = instance.distance, instance.times
    return min(
        (max_price - d.diff_limit(t[j - 1], t[ell - 1], direction) for ell in others),
        default=math.inf,
    )


def build_graph(instance: Instance, prices: Sequence[float]) -> PricingGraph:
    prices = _check_prices(prices)
    n, m = instance.n, len(prices)
    d, t = instance.distance, instance.times
    parr = np.asarray(prices)
    max_price = prices[-1]
    cols: list[tuple] = []  # (tail_slot, tail_pidx, head_slot, head_pidx, kind, boundary) arrays

    def emit(ts, tp, hs, hp, kind, bnd):
        size = len(tp)
        cols.append(
            (
                np.full(size, ts),
                np.asarray(tp),
                np.full(size, hs) if np.isscalar(hs) else np.asarray(hs),
                np.asarray(hp),
                np.full(size, int(kind)),
                np.asarray(bnd, dtype=float),
            )
        )

    # slot j is trivially covered by itself, so only the other slots are checked
    for j in range(1, n + 1):
        thr = _limit_threshold(instance, j, range(1, j), -math.inf, max_price)
        ok = np.flatnonzero(parr <= thr + COVER_SLACK)
        emit(0, np.full(ok.size, -1), j, ok, ArcClass.A1, np.full(ok.size, -math.inf))

    r_grid, q_grid = np.meshgrid(parr, parr, indexing="ij")
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            sigma = np.asarray(instance.sigma(i - 1, j - 1, q_grid - r_grid), dtype=float)
            ok = np.isfinite(sigma)
            s = np.where(ok, sigma, 0.0)
            # at sigma both endpoint slots tie, so only slots strictly between need checking
            left = d(s - t[i - 1]) + r_grid
            right = d(s - t[j - 1]) + q_grid
            for ell in range(i + 1, j):
                bar = d(s - t[ell - 1]) + max_price + COVER_SLACK
                ok &= (left <= bar) & (right <= bar)
            ri, qi = np.nonzero(ok)
            emit(i, ri, j, qi, ArcClass.A2, sigma[ri, qi])

    for j in range(1, n + 1):
        thr = _limit_threshold(instance, j, range(j + 1, n + 1), math.inf, max_price)
        ok = np.flatnonzero(parr <= thr + COVER_SLACK)
        emit(j, ok, n + 1, np.full(ok.size, -1), ArcClass.A3, np.full(ok.size, math.inf))

    stacked = [np.concatenate([c[k] for c in cols]) for k in range(6)]
    ts, tp, hs, hp, kind, bnd = stacked
    # topological order: by tail slot, then head slot
    order = np.lexsort((hp, tp, hs, ts))
    return PricingGraph(
        n,
        prices,
        ts[order].astype(int),
        tp[order].astype(int),
        hs[order].astype(int),
        hp[order].astype(int),
        kind[order].astype(int),
        bnd[order],
    )


def _reward_block(
    instance: Instance, slot: int, price: float, lefts: np.ndarray, rights: np.ndarray, mode: Mode
) -> np.ndarray:
    """Pair rewards for every (incoming boundary, outgoing boundary) at vertex ``(slot, price)``."""
    sub = instance.distance.sublevel_interval(instance.times[slot - 1], price)
    if sub.is_empty:
        v = np.zeros((lefts.size, rights.size))
    else:
        f_lo = instance.population.cdf(np.maximum(lefts, sub.lo))
        f_hi = instance.population.cdf(np.minimum(rights, sub.hi))
        v = np.maximum(f_hi[None, :] - f_lo[:, None], 0.0)
    cap = instance.capacities[slot - 1] + CAPACITY_SLACK
    rate = price
    if isinstance(mode, Relaxed):
        cap += mode.extra_capacity
        rate = price + mode.delta
    ok = (lefts[:, None] <= rights[None, :]) & (v <= cap)
    return np.where(ok, rate * v, -np.inf)


def pair_reward(instance: Instance, a: Arc, a2: Arc, mode: Mode = EXACT) -> float:
    """Reward ``w(a, a2)`` earned by the slot at the vertex shared by two consecutive arcs."""
    if a.head != a2.tail or a.head.price is None:
        raise ValueError(f"arcs are not consecutive through an internal vertex: {a.head} vs {a2.tail}")
    block = _reward_block(
        instance, a.head.slot, a.head.price, np.array([a.boundary]), np.array([a2.boundary]), mode
    )
    return float(block[0, 0])


def _groups(keys: np.ndarray, order: np.ndarray) -> dict[int, np.ndarray]:
    sk = keys[order]
    uniq, starts = np.unique(sk, return_index=True)
    ends = np.append(starts[1:], len(sk))
    return {int(k): order[s:e] for k, s, e in zip(uniq, starts, ends)}


def longest_path(instance: Instance, graph: PricingGraph, mode: Mode = EXACT) -> tuple[float, list[int], int]:
    """Best path reward, its arc indices, and the number of arc pairs evaluated."""
    m = len(graph.prices)
    head_key = graph.head_slot * (m + 1) + graph.head_pidx + 1
    tail_key = graph.tail_slot * (m + 1) + graph.tail_pidx + 1
    incoming = _groups(head_key, np.lexsort((graph.tail_pidx, graph.tail_slot, head_key)))
    outgoing = _groups(tail_key, np.lexsort((graph.head_pidx, graph.head_slot, tail_key)))

    best = np.full(len(graph), -np.inf)
    best[graph.kind == ArcClass.A1] = 0.0
    pred = np.full(len(graph), -1)
    transitions = 0

    # keys increase with (slot, price index): a topological order of the vertices
    for key in sorted(k for k in incoming if k in outgoing):
        ins = incoming[key]
        ins = ins[best[ins] > -np.inf]
        outs = outgoing[key]
        if ins.size == 0:
            continue
        slot, pidx = divmod(key, m + 1)
        rewards = _reward_block(
            instance, slot, graph.prices[pidx - 1], graph.boundary[ins], graph.boundary[outs], mode
        )
        transitions += rewards.size
        total = best[ins][:, None] + rewards
        # argmax keeps the first maximum, i.e. the lexicographically smallest tail
        choice = np.argmax(total, axis=0)
        value = total[choice, np.arange(outs.size)]
        best[outs] = value
        pred[outs] = np.where(value > -np.inf, ins[choice], -1)

    sinks = np.flatnonzero(graph.kind == ArcClass.A3)
    sinks = sinks[np.lexsort((graph.tail_pidx[sinks], graph.tail_slot[sinks]))]
    if sinks.size == 0 or not np.any(best[sinks] > -np.inf):
        return -math.inf, [], transitions
    last = int(sinks[np.argmax(best[sinks])])
    chain = [last]
    while pred[chain[-1]] >= 0:
        chain.append(int(pred[chain[-1]]))
    chain.reverse()
    return float(best[last]), chain, transitions


def path_to_profile(path: Sequence[Vertex], prices: Sequence[float], n: int) -> tuple[float, ...]:
    """Visited slots take their vertex price; every other slot is priced at ``max(prices)``."""
    slots = [v.slot for v in path]
    if any(b <= a for a, b in zip(slots, slots[1:])):
        raise ValueError(f"path slots must be strictly increasing, got {slots}")
    profile = [max(prices)] * n
    for v in path:
        if 1 <= v.slot <= n:
            profile[v.slot - 1] = float(v.price)
    return tuple(profile)


def solve(instance: Instance, prices: Sequence[float], mode: Mode = EXACT) -> SolveResult:
    graph = build_graph(instance, prices)
    value, chain, transitions = longest_path(instance, graph, mode)
    if not chain:
        return SolveResult(-math.inf, (), None, None, transitions, len(graph))
    path = [graph.arc(chain[0]).tail] + [graph.arc(k).head for k in chain]
    profile = path_to_profile(path, graph.prices, instance.n)
    loads = compute_regions(instance, profile).loads
    return SolveResult(value, tuple(path), profile, loads, transitions, len(graph))
