import pytest

from slot_pricer import DensityModel, Instance, QuadraticOffset


@pytest.fixture
def ref1():
    """Two quadratic slots at 0 and 2, uniform 0.5 on [-1, 3], capacities 2."""
    return Instance(QuadraticOffset(1.0, -1.0), (0.0, 2.0), (2.0, 2.0), DensityModel.uniform(-1.0, 3.0, 0.5))


@pytest.fixture
def single_slot():
    return Instance(QuadraticOffset(1.0, -1.0), (0.0,), (2.0,), DensityModel.uniform(-1.0, 1.0, 1.0))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
