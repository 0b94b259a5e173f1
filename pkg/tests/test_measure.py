import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slot_pricer import DensityModel, Interval, ValidationError


@pytest.fixture
def uniform():
    return DensityModel.uniform(-1.0, 3.0, 0.5)


def test_mass_examples(uniform):
    assert uniform.mass(-1.0, 3.0) == 2.0
    assert uniform.mass(2.0, 2.0) == 0.0
    assert uniform.mass(-math.inf, 1.0) == 1.0
    assert uniform.mass(-math.inf, math.inf) == 2.0
    assert uniform.mass_of(Interval.empty()) == 0.0


def test_mass_rejects_reversed(uniform):
    with pytest.raises(ValueError):
        uniform.mass(1.0, 0.0)


def test_bounds_and_support():
    assert DensityModel.uniform(-1, 3, 0.5).bounds() == (0.5, 0.5)
    two = DensityModel((0.0, 1.0, 2.0), (0.2, 0.8))
    assert two.bounds() == (0.2, 0.8)
    assert two.continuous_eligible
    gap = DensityModel((0.0, 1.0, 2.0), (0.0, 0.8))
    assert gap.bounds() == (0.0, 0.8)
    assert not gap.continuous_eligible
    assert DensityModel((-2.0, -1.0, 3.0), (0.0, 0.5)).support() == Interval(-1.0, 3.0)
    assert DensityModel((0.0, 1.0, 2.0), (0.3, 0.7)).support() == Interval(0.0, 2.0)


@pytest.mark.parametrize(
    "breaks, dens",
    [
        ((0.0,), ()),
        ((0.0, 1.0), (0.5, 0.5)),
        ((0.0, 1.0, 1.0), (0.5, 0.5)),
        ((0.0, 1.0), (-0.1,)),
        ((0.0, 1.0), (0.0,)),
    ],
)
def test_rejects_bad_models(breaks, dens):
    with pytest.raises(ValidationError):
        DensityModel(breaks, dens)


def test_unsorted_breakpoint_error_names_index():
    with pytest.raises(ValidationError) as exc:
        DensityModel((0.0, 2.0, 1.0), (1.0, 1.0))
    assert exc.value.path == ("measure", "breakpoints", 2)


models = st.integers(1, 5).flatmap(
    lambda m: st.tuples(
        st.lists(st.floats(-10, 10), min_size=m + 1, max_size=m + 1, unique=True).map(sorted),
        st.lists(st.floats(0.01, 2.0), min_size=m, max_size=m),
    )
).filter(lambda bd: min(np.diff(bd[0])) > 1e-3)


@settings(max_examples=200, deadline=None)
@given(models, st.lists(st.floats(-15, 15), min_size=3, max_size=3))
def test_additivity_and_monotonicity(bd, pts):
    model = DensityModel(tuple(bd[0]), tuple(bd[1]))
    a, b, c = sorted(pts)
    whole = model.mass(a, c)
    assert model.mass(a, b) + model.mass(b, c) == pytest.approx(whole, rel=1e-12, abs=1e-12)
    assert model.mass(a, b) <= whole + 1e-15
    analytic = sum(r * (x1 - x0) for r, x0, x1 in zip(bd[1], bd[0], bd[0][1:]))
    assert model.mass(-math.inf, math.inf) == pytest.approx(analytic, rel=1e-12)


def test_sampling_matches_cdf():
    model = DensityModel((0.0, 1.0, 2.0, 3.0), (1.0, 0.0, 3.0))
    x = model.sample(200_000, np.random.default_rng(0))
    assert not np.any((x > 1.0) & (x < 2.0))
    assert np.mean(x <= 1.0) == pytest.approx(0.25, abs=0.005)
