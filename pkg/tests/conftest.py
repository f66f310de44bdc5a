import math

import numpy as np
import pytest

from quasitoric import fixtures
from quasitoric.atlas import build_atlas

S, T = 1.0, math.sqrt(2)
A_PENT = math.cos(2 * math.pi / 5)


@pytest.fixture(scope="session")
def interval():
    return fixtures.load("interval")


@pytest.fixture(scope="session")
def triangle():
    return fixtures.load("triangle")


@pytest.fixture(scope="session")
def pentagon():
    return fixtures.load("pentagon")


@pytest.fixture(scope="session")
def square():
    return fixtures.load("square")


@pytest.fixture(scope="session")
def interval_atlas(interval):
    return build_atlas(interval)


@pytest.fixture(scope="session")
def triangle_atlas(triangle):
    return build_atlas(triangle)


@pytest.fixture(scope="session")
def pentagon_atlas(pentagon):
    return build_atlas(pentagon)


@pytest.fixture(scope="session")
def square_atlas(square):
    return build_atlas(square)


@pytest.fixture(params=["interval", "triangle", "pentagon", "square"], scope="session")
def any_atlas(request):
    return build_atlas(fixtures.load(request.param))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def chart_with(atlas, active):
    return next(c for c in atlas if c.active == tuple(active))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
