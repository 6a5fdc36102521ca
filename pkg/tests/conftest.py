import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graph_umap import build_graph


@pytest.fixture
def triangle():
    return build_graph([(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def path3():
    return build_graph([(0, 1), (1, 2)])


@pytest.fixture
def c4():
    return build_graph([(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def k4():
    return build_graph([(i, j) for i in range(4) for j in range(i + 1, 4)])


def path_graph(n):
    return build_graph([(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
