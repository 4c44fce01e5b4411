"""
Pytest configuration and fixtures for transversal tests.
"""

import os
import random

import networkx as nx
import pytest

from transversal.core import GraphCollection
from transversal.models import PipelineConfig


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """Keep tests away from the user's config, seed and run history."""
    for key in list(os.environ.keys()):
        if key.startswith("TRANSVERSAL_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.setattr("transversal.config.Config._load_user_config", lambda self: {})
    monkeypatch.setenv("TRANSVERSAL_OUTPUT_RUNS_DIR", str(tmp_path / "runs"))
    monkeypatch.setattr("transversal.config._config", None)


@pytest.fixture
def rng():
    """Seeded generator for building random inputs."""
    return random.Random(1234)


@pytest.fixture
def config():
    """Default pipeline constants with a fixed seed."""
    return PipelineConfig(rng_seed=7)


@pytest.fixture
def complete_collection():
    """Nine identical copies of K_10."""
    return GraphCollection.identical(nx.complete_graph(10), 9)


@pytest.fixture
def tiny_collection():
    """Three colours on four vertices:

    colour 0: path 0-1-2-3, colour 1: triangle 0-1-2, colour 2: single edge 2-3.
    """
    return GraphCollection(4, [[(0, 1), (1, 2), (2, 3)], [(0, 1), (0, 2), (1, 2)], [(2, 3)]])


def dense_collection(n: int, m: int, p: float, seed: int) -> GraphCollection:
    """m independent G(n, p) colours."""
    gen = random.Random(seed)
    return GraphCollection.from_graphs(
        n, [nx.gnp_random_graph(n, p, seed=gen.randrange(2**32)) for _ in range(m)]
    )


@pytest.fixture
def make_dense():
    """Factory for independent G(n, p) collections."""
    return dense_collection
