import math

import numpy as np
import pytest

from slot_pricer import (
    DensityModel,
    HyperbolicOffset,
    Instance,
    ModeError,
    QuadraticOffset,
    compute_regions,
    derive_constants,
    gap_sweep,
    lower_bound,
    relaxed_capacity,
    round_down,
    solve,
    upper_bound,
)
from slot_pricer.continuous import upper_bound_grid
from slot_pricer.generators import compact_instance
from slot_pricer.model import price_grid


def _inst(times, a=1.0, density=None):
    density = density or DensityModel.uniform(-1.0, 3.0, 0.5)
    return Instance(QuadraticOffset(a, -1.0), times, (2.0,) * len(times), density)


def test_lipschitz_constant_examples(ref1):
    assert derive_constants(_inst((0.0, 1.0))).L == pytest.approx(1.0)
    assert derive_constants(ref1).L == pytest.approx(0.5)
    assert derive_constants(_inst((0.0,))).L == 0.0
    # smallest gap dominates
    assert derive_constants(_inst((0.0, 0.5, 2.5))).L == pytest.approx(2.0)


def test_constants_ref1(ref1):
    c = derive_constants(ref1)
    assert (c.alpha, c.mu_upper, c.p_max) == (2.0, 0.5, 1.0)
    assert c.delta_max == pytest.approx(16.0)
    assert derive_constants(_inst((0.0,))).delta_max == math.inf


def test_relaxed_capacity_example():
    c = derive_constants(_inst((0.0, 1.0), density=DensityModel.uniform(-1.0, 3.0, 1.0)))
    # 1 + 1*1*0.02 + 2*1*sqrt(2*0.02/2)
    assert relaxed_capacity(c, 1.0, 0.02) == pytest.approx(1.0 + 0.02 + 2 * math.sqrt(0.02))


def test_mode_errors():
    hyp = Instance(HyperbolicOffset(1.0, -2.0), (0.0, 1.0), (1.0, 1.0), DensityModel.uniform(0, 1, 1))
    with pytest.raises(ModeError):
        derive_constants(hyp)
    with pytest.raises(ModeError):
        upper_bound(hyp, 0.1)
    holes = _inst((0.0, 2.0), density=DensityModel((-1.0, 0.0, 1.0, 3.0), (0.5, 0.0, 0.5)))
    with pytest.raises(ModeError):
        gap_sweep(holes, [0.1])


def test_single_slot_has_no_correction(single_slot):
    ub_raw, ub, _ = upper_bound(single_slot, 0.1)
    assert ub == ub_raw


def test_empty_sweep(ref1):
    assert gap_sweep(ref1, []) == []


@pytest.mark.parametrize("seed", range(6))
def test_sandwich(seed):
    inst = compact_instance(np.random.default_rng(seed))
    reports = gap_sweep(inst, [0.2, 0.1, 0.05])
    for r in reports:
        assert r.lb <= r.ub + 1e-9
        assert r.ub_raw <= r.ub + 1e-12 or inst.n == 1
        assert r.gap >= -1e-9
    assert max(r.lb for r in reports) <= min(r.ub for r in reports) + 1e-9


def test_threads_do_not_change_results(ref1):
    deltas = [0.4, 0.2, 0.1]
    assert gap_sweep(ref1, deltas, threads=1) == gap_sweep(ref1, deltas, threads=3)


def test_lower_bound_is_grid_optimum(ref1):
    lb, profile = lower_bound(ref1, 0.25)
    assert lb == solve(ref1, price_grid(ref1, 0.25)).value
    assert compute_regions(ref1, profile).revenue == pytest.approx(lb)


def test_upper_bound_grid_contains_rounded_box(ref1):
    c = derive_constants(ref1)
    for delta in (0.3, 0.25, 0.07):
        grid = upper_bound_grid(c, delta)
        assert set(round_down([c.p_min, c.p_max], delta)) <= set(grid)
        assert all(abs(p / delta - round(p / delta)) < 1e-9 for p in grid)


@pytest.mark.parametrize("seed", range(40))
def test_rounding_sandwich(seed):
    rng = np.random.default_rng(seed)
    inst = compact_instance(rng)
    c = derive_constants(inst)
    delta = rng.uniform(0.0, 1.0) * min(c.delta_max, 2.0) or 1e-3
    p = rng.uniform(c.p_min - 1, c.p_max + 1, inst.n)
    base = compute_regions(inst, p).loads
    rounded = compute_regions(inst, round_down(p, delta)).loads
    slack = c.mu_upper * c.L * delta
    for x, y in zip(base, rounded):
        assert x - slack - 1e-9 <= y <= x + slack + 2 * c.mu_upper * math.sqrt(2 * delta / c.alpha) + 1e-9
