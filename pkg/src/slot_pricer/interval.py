"""Closed intervals on the extended real line."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; endpoints may be infinite.

    The empty interval is the canonical ``Interval(inf, -inf)``. A degenerate
    interval (``lo == hi``) is a single point and is *not* empty.
    """

    lo: float
    hi: float

    @classmethod
    def empty(cls) -> Interval:
        return cls(math.inf, -math.inf)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi or self.lo == math.inf or self.hi == -math.inf

    @property
    def length(self) -> float:
        if self.is_empty:
            return 0.0
        return self.hi - self.lo

    def intersect(self, other: Interval) -> Interval:
        if self.is_empty or other.is_empty:
            return Interval.empty()
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return Interval.empty()
        return Interval(lo, hi)

    def contains(self, x: float) -> bool:
        return not self.is_empty and self.lo <= x <= self.hi

    def as_pair(self) -> tuple[float, float] | None:
        return None if self.is_empty else (self.lo, self.hi)
