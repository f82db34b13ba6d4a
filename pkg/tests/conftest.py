import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lgzlab import Graph, PointCloud, SparseHermitian, named_graph


@pytest.fixture
def c4():
    return named_graph("c4")


@pytest.fixture
def k3():
    return named_graph("k3")


@pytest.fixture
def k4():
    return named_graph("k4")


@pytest.fixture
def p3():
    return named_graph("p3")


@pytest.fixture
def unit_square():
    return PointCloud([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture
def diag_half():
    return SparseHermitian.from_dense(np.diag([0.0, 0.0, 1.0, 1.0]))


def random_graph_seeded(n, p, seed):
    rng = np.random.default_rng(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)
