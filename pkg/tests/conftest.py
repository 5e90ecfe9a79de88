from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest
from hypothesis import settings

from treelattice.covering import SpanningData
from treelattice.graph import graph_invariants, parse_graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = ("theta", "dumbbell", "bouquet", "k4", "double_theta")


def fixture_path(name: str) -> Path:
    return Path(str(resources.files("treelattice") / "fixtures" / f"{name}.graph"))


def load(name: str):
    return parse_graph(fixture_path(name).read_text())


_cache: dict[str, tuple] = {}


def bundle(name: str):
    """(graph, spanning data, invariants), shared across tests."""
    if name not in _cache:
        g = load(name)
        _cache[name] = (g, SpanningData(g), graph_invariants(g))
    return _cache[name]


@pytest.fixture(params=FIXTURES)
def fixture_name(request):
    return request.param


@pytest.fixture
def graph(fixture_name):
    return bundle(fixture_name)[0]


@pytest.fixture
def theta():
    return bundle("theta")


@pytest.fixture
def dumbbell():
    return bundle("dumbbell")


@pytest.fixture
def bouquet():
    return bundle("bouquet")
