"""Piecewise-constant population densities with exact interval masses."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from slot_pricer.errors import ValidationError
from slot_pricer.interval import Interval


@dataclass(frozen=True)
class DensityModel:
    """Density ``densities[k]`` on ``(breakpoints[k], breakpoints[k+1])``, zero elsewhere.

    Interval masses are differences of the piecewise-linear CDF, which is
    tabulated once at the breakpoints.
    """

    breakpoints: tuple[float, ...]
    densities: tuple[float, ...]
    _x: np.ndarray = field(init=False, repr=False, compare=False)
    _cum: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        x = np.asarray(self.breakpoints, dtype=float)
        rho = np.asarray(self.densities, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise ValidationError("measure.breakpoints: need at least two breakpoints", ("measure", "breakpoints"))
        if rho.size != x.size - 1:
            raise ValidationError(
                f"measure.densities: expected {x.size - 1} values for {x.size} breakpoints, got {rho.size}",
                ("measure", "densities"),
            )
        if not np.all(np.isfinite(x)):
            raise ValidationError("measure.breakpoints: values must be finite", ("measure", "breakpoints"))
        bad = np.flatnonzero(np.diff(x) <= 0)
        if bad.size:
            k = int(bad[0]) + 1
            raise ValidationError(
                f"measure.breakpoints[{k}]: breakpoints must be strictly increasing "
                f"({x[k]!r} follows {x[k - 1]!r})",
                ("measure", "breakpoints", k),
            )
        neg = np.flatnonzero(~(rho >= 0) | ~np.isfinite(rho))
        if neg.size:
            k = int(neg[0])
            raise ValidationError(
                f"measure.densities[{k}]: density must be finite and nonnegative, got {rho[k]!r}",
                ("measure", "densities", k),
            )
        cum = np.concatenate(([0.0], np.cumsum(rho * np.diff(x))))
        if not cum[-1] > 0:
            raise ValidationError("measure.densities: total mass must be positive", ("measure", "densities"))
        object.__setattr__(self, "breakpoints", tuple(float(v) for v in x))
        object.__setattr__(self, "densities", tuple(float(v) for v in rho))
        object.__setattr__(self, "_x", x)
        object.__setattr__(self, "_cum", cum)

    @classmethod
    def uniform(cls, lo: float, hi: float, density: float) -> DensityModel:
        return cls((lo, hi), (density,))

    @property
    def total_mass(self) -> float:
        return float(self._cum[-1])

    @property
    def continuous_eligible(self) -> bool:
        """Interval supported with density bounded away from zero."""
        return min(self.densities) > 0

    def cdf(self, x):
        """``mu((-inf, x])``; vectorised, exact at the breakpoints."""
        out = np.interp(x, self._x, self._cum)
        return float(out) if np.ndim(out) == 0 else out

    def mass(self, lo: float, hi: float) -> float:
        """Mass of ``[lo, hi]``; rays use infinite endpoints."""
        if lo > hi:
            raise ValueError(f"mass: interval endpoints out of order ({lo} > {hi})")
        if lo == hi:
            return 0.0
        return self.cdf(hi) - self.cdf(lo)

    def mass_of(self, interval: Interval) -> float:
        if interval.is_empty:
            return 0.0
        return self.mass(interval.lo, interval.hi)

    def bounds(self) -> tuple[float, float]:
        return min(self.densities), max(self.densities)

    def support(self) -> Interval:
        nz = [k for k, rho in enumerate(self.densities) if rho > 0]
        return Interval(self.breakpoints[nz[0]], self.breakpoints[nz[-1] + 1])

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Inverse-CDF draws; zero-density pieces are never selected."""
        target = rng.random(size) * self.total_mass
        piece = np.searchsorted(self._cum[1:], target, side="right")
        piece = np.minimum(piece, len(self.densities) - 1)
        rho = np.asarray(self.densities)[piece]
        return self._x[piece] + (target - self._cum[piece]) / rho

    def to_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "densities": list(self.densities)}


def density_from_dict(data: dict) -> DensityModel:
    return DensityModel(tuple(float(v) for v in data["breakpoints"]), tuple(float(v) for v in data["densities"]))

