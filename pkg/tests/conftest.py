import numpy as np
import pytest

from bicircle import fixtures


def as_tuple(c):
    """(center, radius, normal) in floats, for the oracles."""
    return (tuple(float(x) for x in c.center), float(c.radius), tuple(float(x) for x in c.normal))


@pytest.fixture(scope="session")
def order_fixtures():
    return fixtures.order_type_fixtures()


@pytest.fixture(scope="session")
def unlinked():
    return fixtures.named("unlinked")


@pytest.fixture(scope="session")
def oloid():
    return fixtures.named("oloid")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.TITLES):
        status = mod.RESULTS.get(n, "NOT RUN")
        terminalreporter.write_line(f"criterion {n:2d}: {status} - {mod.TITLES[n]}")
