import itertools

import pytest
from hypothesis import HealthCheck, settings

from koptd.graph import build_graph, from_edges

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def cycle(n, start=1):
    vs = list(range(start, start + n))
    return from_edges([(vs[i], vs[(i + 1) % n]) for i in range(n)])


def path(n, start=1):
    return from_edges([(i, i + 1) for i in range(start, start + n - 1)])


def complete(n, start=1):
    return build_graph(range(start, start + n), itertools.combinations(range(start, start + n), 2))


def wheel(rim):
    """Hub 0 joined to the cycle 1..rim."""
    es = [(i, i % rim + 1) for i in range(1, rim + 1)] + [(0, i) for i in range(1, rim + 1)]
    return from_edges(es)


def prism():
    return from_edges([(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4), (2, 5), (3, 6)])


def theta():
    """C6 on 1..6 with the chord {1,4}."""
    return from_edges([(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4)])


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def c4():
    return cycle(4)
