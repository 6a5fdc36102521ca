"""Real-dataset ingestion checks.

The benchmark datasets are not distributed with the repository; drop them
into a ``data/`` directory at the repo root and these tests verify the
documented (n, m) of the largest connected component.
"""

from pathlib import Path

import pytest

from graph_umap import read_edge_list, read_matrix_market

DATA_DIR = Path(__file__).parent.parent / "data"


def _needs(name):
    path = DATA_DIR / name
    if not path.exists():
        pytest.skip(f"dataset {name} not present under {DATA_DIR}")
    return path


def test_us_powergrid_dimensions():
    g = read_edge_list(_needs("us_powergrid.edges"))
    assert (g.n, g.m) == (4941, 6594)


def test_facebook_dimensions():
    g = read_edge_list(_needs("facebook.edges"))
    assert (g.n, g.m) == (4039, 88234)


def test_plat1919_dimensions():
    g = read_matrix_market(_needs("plat1919.mtx"))
    assert (g.n, g.m) == (1919, 15240)
