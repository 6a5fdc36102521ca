import numpy as np
import pytest

from graph_umap import synth_graph
from graph_umap.graph import GraphError


def test_grid_3x3():
    g = synth_graph("grid", 9, seed=0)
    assert (g.n, g.m) == (9, 12)
    assert g.is_connected()


def test_grid_non_square_n():
    g = synth_graph("grid", 10, seed=0)
    assert g.n == 10
    assert g.is_connected()


def test_scale_free_edge_count_and_connectivity():
    g = synth_graph("scale_free", 100, seed=1, m0=2)
    # complete core on m0+1 vertices plus m0 edges per later vertex
    assert g.m == 3 + 2 * (100 - 3)
    assert g.is_connected()


def test_scale_free_deterministic():
    a = synth_graph("scale_free", 80, seed=5, m0=3)
    b = synth_graph("scale_free", 80, seed=5, m0=3)
    assert np.array_equal(a.edges, b.edges)
    c = synth_graph("scale_free", 80, seed=6, m0=3)
    assert not np.array_equal(a.edges, c.edges)


def test_random_regular_degrees():
    g = synth_graph("random_regular", 50, seed=2, d=3)
    assert np.all(g.degrees == 3)
    assert g.is_connected()


def test_random_regular_larger():
    g = synth_graph("random_regular", 500, seed=0, d=8)
    assert np.all(g.degrees == 8)
    assert g.is_connected()


def test_random_regular_infeasible():
    with pytest.raises(GraphError, match="even"):
        synth_graph("random_regular", 51, seed=0, d=3)


def test_bad_kind_and_small_n():
    with pytest.raises(GraphError):
        synth_graph("torus", 10)
    with pytest.raises(GraphError):
        synth_graph("grid", 2)
