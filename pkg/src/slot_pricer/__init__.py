"""Revenue-maximising time-slot pricing for a continuum of users."""

from slot_pricer.continuous import (
    BoundReport,
    ContinuousConstants,
    derive_constants,
    gap_sweep,
    lower_bound,
    relaxed_capacity,
    upper_bound,
)
from slot_pricer.distance import HyperbolicOffset, QuadraticOffset
from slot_pricer.errors import ModeError, ValidationError
from slot_pricer.interval import Interval
from slot_pricer.measure import DensityModel
from slot_pricer.model import (
    Instance,
    RegionReport,
    compute_regions,
    price_bounds,
    price_grid,
    revenue_or_infeasible,
    round_down,
)
from slot_pricer.oracle import enumerate_opt, monte_carlo_loads, verify_solver
from slot_pricer.solver import EXACT, Exact, Relaxed, SolveResult, build_graph, pair_reward, solve

__all__ = [
    "BoundReport",
    "ContinuousConstants",
    "DensityModel",
    "EXACT",
    "Exact",
    "HyperbolicOffset",
    "Instance",
    "Interval",
    "ModeError",
    "QuadraticOffset",
    "RegionReport",
    "Relaxed",
    "SolveResult",
    "ValidationError",
    "build_graph",
    "compute_regions",
    "derive_constants",
    "enumerate_opt",
    "gap_sweep",
    "lower_bound",
    "monte_carlo_loads",
    "pair_reward",
    "price_bounds",
    "price_grid",
    "relaxed_capacity",
    "revenue_or_infeasible",
    "round_down",
    "solve",
    "upper_bound",
    "verify_solver",
]
