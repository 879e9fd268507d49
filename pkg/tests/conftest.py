import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hypernet.catalog import fig1, fig1_core, running, running_core, running_quotient
from hypernet.generate import random_hypernetwork

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def small_networks(max_vertices=5, max_edges=7, max_order=2, **kw):
    return st.integers(0, 2**32 - 1).map(
        lambda s: random_hypernetwork(random.Random(s), max_vertices, max_edges, max_order, **kw))


@pytest.fixture
def net():
    return running()


@pytest.fixture
def core():
    return running_core()


@pytest.fixture
def fig():
    return fig1()


@pytest.fixture
def fig_core():
    return fig1_core()


@pytest.fixture
def qnet():
    return running_quotient()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
