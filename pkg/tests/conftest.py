import pytest

from abcontrast.config import RunConfig
from abcontrast.geometry import TrapezoidGeometry, build_trapezoid


@pytest.fixture
def unit_geom():
    return TrapezoidGeometry(1.0, 1.0, 1.0, 0.1)


@pytest.fixture
def benchmark_config():
    """c = 50 um, l = 86.6 um (s = 100 um), d = 100 um, 5 keV, 1 W/cm^2 at 100 um."""
    return RunConfig()


@pytest.fixture
def benchmark_geom(benchmark_config):
    return benchmark_config.geometry.build()


@pytest.fixture
def benchmark_pair(benchmark_geom):
    return build_trapezoid(benchmark_geom)


# One line per acceptance criterion, filled in by tests/test_acceptance.py.
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
