"""
Shared fixtures and random-network builders for the Dowkernet test suite.
"""
from pathlib import Path

import numpy as np
import pytest

from dowkernet.ingest import parse_edge_list, read_network
from dowkernet.network import DirectedNetwork, NetworkKind, effective_distance

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
FIGURE1 = FIXTURES / "figure1.csv"
TRADE32 = FIXTURES / "trade32.csv"


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def random_flow(rng: np.random.Generator, n: int, density: float = 0.4) -> DirectedNetwork:
    """Sparse positive flow network on labels v0..v{n-1}."""
    mask = rng.random((n, n)) < density
    weights = np.where(mask, rng.uniform(0.5, 10.0, (n, n)), 0.0)
    np.fill_diagonal(weights, 0.0)
    return DirectedNetwork(tuple(f"v{i}" for i in range(n)), weights)


def random_dissimilarity(rng: np.random.Generator, n: int, levels: int = 0) -> DirectedNetwork:
    """Positive off-diagonal distances; ``levels`` > 0 draws from a small grid to force ties."""
    if levels:
        weights = rng.integers(1, levels + 1, (n, n)).astype(float)
    else:
        weights = rng.uniform(0.1, 5.0, (n, n))
    np.fill_diagonal(weights, 0.0)
    return DirectedNetwork(tuple(f"v{i}" for i in range(n)), weights, NetworkKind.DISSIMILARITY)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def figure1():
    """Six-node star: x3 sends to everyone, x4 also sends to x6."""
    return parse_edge_list(FIGURE1.read_text(encoding="utf-8"))


@pytest.fixture
def figure1_gamma(figure1):
    return effective_distance(figure1)


@pytest.fixture
def trade32():
    return read_network(TRADE32, "adjacency")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
