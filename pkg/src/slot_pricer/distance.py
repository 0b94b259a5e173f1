"""User inconvenience functions ``d`` and the analytic queries built on them.

Both families are strictly convex with their unique minimum at 0. Every
method that takes a point or a price accepts scalars and numpy arrays alike;
infinite results are plain ``float('inf')`` values, which gives the extended
real order for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from scipy import optimize

from slot_pricer.interval import Interval

ArrayLike = Union[float, np.ndarray]

BISECTION_XTOL = 1e-12
BISECTION_MAXITER = 200


def _check_direction(direction: float) -> None:
    if direction not in (-math.inf, math.inf):
        raise ValueError(f"direction must be -inf or +inf, got {direction!r}")


def _bisect(f, lo: float, hi: float) -> float:
    """Plain bisection on a bracketing interval of an increasing function."""
    return optimize.bisect(f, lo, hi, xtol=BISECTION_XTOL, maxiter=BISECTION_MAXITER)


@dataclass(frozen=True)
class Distance:
    """Common interface of the built-in cost families."""

    a: float
    c: float

    family: ClassVar[str] = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0):
            raise ValueError(f"{self.family}: parameter a must be positive, got {self.a!r}")
        if not math.isfinite(self.c):
            raise ValueError(f"{self.family}: parameter c must be finite, got {self.c!r}")

    def __call__(self, x: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    @property
    def minimum(self) -> float:
        """``d(0)``, the global minimum."""
        return float(self(0.0))

    def diff(self, x: ArrayLike, ti: float, tj: float) -> ArrayLike:
        """``d(x - ti) - d(x - tj)``."""
        raise NotImplementedError

    def diff_inverse(self, ti: float, tj: float, q: ArrayLike) -> ArrayLike:
        """Solve ``d(x - ti) - d(x - tj) = q`` for ``x`` (requires ``ti < tj``).

        Returns ``-inf`` when the difference exceeds ``q`` everywhere and
        ``+inf`` when it stays below ``q`` everywhere.
        """
        raise NotImplementedError

    def diff_limit(self, ti: float, tj: float, direction: float) -> float:
        """``lim d(s - ti) - d(s - tj)`` as ``s`` tends to ``direction``."""
        raise NotImplementedError

    def sublevel_interval(self, tj: float, q: float) -> Interval:
        """``{x : d(x - tj) + q <= 0}``."""
        h = self._sublevel_halfwidth(-q - self.c)
        if h is None:
            return Interval.empty()
        return Interval(tj - h, tj + h)

    def _sublevel_halfwidth(self, level: float) -> float | None:
        raise NotImplementedError

    @property
    def strong_convexity(self) -> float | None:
        return None

    def to_dict(self) -> dict:
        return {"family": self.family, "a": self.a, "c": self.c}


@dataclass(frozen=True)
class QuadraticOffset(Distance):
    """``d(x) = a x^2 + c``."""

    family: ClassVar[str] = "quadratic"

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return self.a * np.square(x) + self.c if isinstance(x, np.ndarray) else self.a * x * x + self.c

    def diff(self, x: ArrayLike, ti: float, tj: float) -> ArrayLike:
        return self.a * (tj - ti) * (2.0 * x - ti - tj)

    def diff_inverse(self, ti: float, tj: float, q: ArrayLike) -> ArrayLike:
        if not ti < tj:
            raise ValueError(f"diff_inverse requires ti < tj, got ti={ti}, tj={tj}")
        return (q + self.a * (tj * tj - ti * ti)) / (2.0 * self.a * (tj - ti))

    def diff_limit(self, ti: float, tj: float, direction: float) -> float:
        _check_direction(direction)
        if ti == tj:
            return 0.0
        return direction if ti < tj else -direction

    def _sublevel_halfwidth(self, level: float) -> float | None:
        if level < 0:
            return None
        return math.sqrt(level / self.a)

    @property
    def strong_convexity(self) -> float:
        return 2.0 * self.a


@dataclass(frozen=True)
class HyperbolicOffset(Distance):
    """``d(x) = a sqrt(1 + x^2) + c``; strictly but not strongly convex."""

    family: ClassVar[str] = "hyperbolic"

    def __call__(self, x: ArrayLike) -> ArrayLike:
        return self.a * np.hypot(1.0, x) + self.c if isinstance(x, np.ndarray) else self.a * math.hypot(1.0, x) + self.c

    def diff(self, x: ArrayLike, ti: float, tj: float) -> ArrayLike:
        # rationalised form: no cancellation for large |x|
        if isinstance(x, np.ndarray):
            den = np.hypot(1.0, x - ti) + np.hypot(1.0, x - tj)
        else:
            den = math.hypot(1.0, x - ti) + math.hypot(1.0, x - tj)
        return self.a * (tj - ti) * (2.0 * x - ti - tj) / den

    def diff_inverse(self, ti: float, tj: float, q: ArrayLike) -> ArrayLike:
        if not ti < tj:
            raise ValueError(f"diff_inverse requires ti < tj, got ti={ti}, tj={tj}")
        if isinstance(q, np.ndarray):
            flat = [self._inverse_scalar(ti, tj, float(v)) for v in q.ravel()]
            return np.asarray(flat, dtype=float).reshape(q.shape)
        return self._inverse_scalar(ti, tj, float(q))

    def _inverse_scalar(self, ti: float, tj: float, q: float) -> float:
        span = self.a * (tj - ti)
        if q <= -span:
            return -math.inf
        if q >= span:
            return math.inf

        def f(x: float) -> float:
            return self.diff(x, ti, tj) - q

        mid, width = 0.5 * (ti + tj), 1.0
        # terminates because |q| < span and the difference tends to +-span
        while (f(mid - width) > 0 or f(mid + width) < 0) and width < 1e300:
            width *= 2.0
        return _bisect(f, mid - width, mid + width)

    def diff_limit(self, ti: float, tj: float, direction: float) -> float:
        _check_direction(direction)
        if ti == tj:
            return 0.0
        return self.a * (tj - ti) if direction > 0 else self.a * (ti - tj)

    def _sublevel_halfwidth(self, level: float) -> float | None:
        r = level / self.a
        if r < 1.0:
            return None
        return math.sqrt(r * r - 1.0)


FAMILIES: dict[str, type[Distance]] = {
    QuadraticOffset.family: QuadraticOffset,
    HyperbolicOffset.family: HyperbolicOffset,
}


def distance_from_dict(data: dict) -> Distance:
    family = data.get("family")
    if family not in FAMILIES:
        raise ValueError(f"distance.family must be one of {sorted(FAMILIES)}, got {family!r}")
    return FAMILIES[family](a=float(data["a"]), c=float(data["c"]))
