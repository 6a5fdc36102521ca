import numpy as np
import pytest

from graph_umap import (
    UNREACHABLE,
    all_pairs_bfs,
    build_graph,
    fuzzy_union,
    knn_from_full_distances,
    partial_bfs,
    smooth_knn_weights,
)
from graph_umap.neighbors import SIGMA_MAX, DirectedKnn

from conftest import path_graph
from oracles import bfs_distances, floyd_warshall, random_connected_graph


def adj_lists(g):
    return [list(g.neighbors(v)) for v in range(g.n)]


def test_all_pairs_p3(path3):
    d = all_pairs_bfs(path3).matrix
    assert d[0, 2] == 2
    assert d[0, 1] == d[1, 2] == 1
    assert d[0, 0] == 0


def test_all_pairs_complete(k4):
    d = all_pairs_bfs(k4).matrix
    off = d[~np.eye(4, dtype=bool)]
    assert np.all(off == 1)


def test_all_pairs_matches_floyd_warshall(rng):
    for _ in range(5):
        n, edges = random_connected_graph(rng, n_max=50)
        g = build_graph(edges)
        got = all_pairs_bfs(g).matrix.astype(float)
        want = floyd_warshall(g.n, g.edges)
        assert np.array_equal(got, want)


def test_all_pairs_disconnected_sentinel():
    g = build_graph([(0, 1), (2, 3)])
    d = all_pairs_bfs(g).matrix
    assert d[0, 2] == UNREACHABLE
    assert d[0, 1] == 1


def test_partial_bfs_p5_center():
    g = path_graph(5)
    dset, knn = partial_bfs(g, k=2, seed=0)
    ids, dists = dset.row(2)
    assert list(ids) == [1, 3]
    assert list(dists) == [1, 1]


def test_partial_bfs_star_tie_break():
    g = build_graph([(0, i) for i in range(1, 6)])  # star, center 0
    seen = set()
    for seed in range(20):
        _, knn = partial_bfs(g, k=3, seed=seed)
        ids = knn.dst[knn.indptr[0]:knn.indptr[1]]
        dd = knn.dist[knn.indptr[0]:knn.indptr[1]]
        assert np.all(dd == 1)
        assert len(ids) == 3
        seen.add(tuple(sorted(int(i) for i in ids)))
    assert len(seen) > 1  # the random tie-break actually varies


def test_partial_bfs_distances_exact(rng):
    for _ in range(5):
        n, edges = random_connected_graph(rng, n_max=100)
        g = build_graph(edges)
        adj = adj_lists(g)
        k = 15
        dset, knn = partial_bfs(g, k=k, seed=11)
        for v in range(g.n):
            oracle = bfs_distances(adj, v)
            ids, dd = dset.row(v)
            assert len(ids) == min(k, len(oracle) - 1)
            for u, d in zip(ids, dd):
                assert oracle[int(u)] == int(d)
            # multiset of k smallest oracle distances
            want = sorted(d for u, d in oracle.items() if u != v)[: len(ids)]
            assert sorted(int(d) for d in dd) == want


def test_partial_bfs_sorted_by_distance_then_id(rng):
    n, edges = random_connected_graph(rng, n_max=60)
    g = build_graph(edges)
    dset, _ = partial_bfs(g, k=10, seed=3)
    for v in range(g.n):
        ids, dd = dset.row(v)
        keys = list(zip(dd.tolist(), ids.tolist()))
        assert keys == sorted(keys)
        assert v not in set(ids.tolist())


def test_partial_bfs_small_component_warns():
    g = build_graph([(0, 1), (1, 2), (3, 4)])
    with pytest.warns(UserWarning, match="smaller than k"):
        dset, _ = partial_bfs(g, k=3, seed=0)
    ids, _ = dset.row(3)
    assert list(ids) == [4]


def test_knn_from_full_p3(path3):
    dset = all_pairs_bfs(path3)
    knn = knn_from_full_distances(dset, k=1, seed=0)
    assert knn.dst[knn.indptr[0]] == 1  # endpoint picks the center
    assert knn.dst[knn.indptr[2]] == 1
    center_pick = int(knn.dst[knn.indptr[1]])
    assert center_pick in (0, 2)


def test_knn_k_large_gives_complete(k4):
    dset = all_pairs_bfs(k4)
    knn = knn_from_full_distances(dset, k=10, seed=0)
    for v in range(4):
        ids = knn.dst[knn.indptr[v]:knn.indptr[v + 1]]
        assert sorted(ids.tolist()) == sorted(set(range(4)) - {v})


def test_knn_full_vs_partial_distance_multisets(rng):
    for trial in range(3):
        n, edges = random_connected_graph(rng, n_max=60)
        g = build_graph(edges)
        k = 5
        dset = all_pairs_bfs(g)
        knn_full = knn_from_full_distances(dset, k=k, seed=trial)
        _, knn_part = partial_bfs(g, k=k, seed=trial)
        for v in range(g.n):
            a = sorted(knn_full.dist[knn_full.indptr[v]:knn_full.indptr[v + 1]].tolist())
            b = sorted(knn_part.dist[knn_part.indptr[v]:knn_part.indptr[v + 1]].tolist())
            assert a == b


def test_smooth_weights_nearest_neighbor_gets_one():
    g = path_graph(6)
    _, knn = partial_bfs(g, k=3, seed=0)
    gk = smooth_knn_weights(knn)
    assert np.all(gk.rho >= 1)
    # per source, max directed weight is exp(0) = 1; check via sym edges >= fuzzy of 1
    for v in range(g.n):
        lo, hi = knn.indptr[v], knn.indptr[v + 1]
        assert knn.dist[lo] == gk.rho[v]


def test_smooth_weights_sigma_residual(rng):
    n, edges = random_connected_graph(rng, n_max=80)
    g = build_graph(edges)
    k = 6
    _, knn = partial_bfs(g, k=k, seed=1)
    gk = smooth_knn_weights(knn)
    target = np.log2(k)
    for v in range(g.n):
        lo, hi = knn.indptr[v], knn.indptr[v + 1]
        d = knn.dist[lo:hi].astype(float)
        sigma = gk.sigma[v]
        total = np.exp(-(d - gk.rho[v]) / sigma).sum()
        clamped = sigma >= SIGMA_MAX or sigma <= 1e-3 or abs(total - target) >= 1e-4
        if not clamped:
            assert abs(total - target) <= 1e-4


def test_smooth_weights_two_neighbor_example():
    # k=2 with distances {1, 2}: target log2(2)=1 forces the far weight to ~0
    # (sigma driven toward the bottom of its range)
    knn = DirectedKnn(
        n=3,
        k=2,
        indptr=np.array([0, 2, 4, 6], dtype=np.int64),
        dst=np.array([1, 2, 0, 2, 0, 1], dtype=np.int32),
        dist=np.array([1, 2, 1, 2, 1, 2], dtype=np.int32),
    )
    gk = smooth_knn_weights(knn)
    for v in range(3):
        near = np.exp(-(1.0 - gk.rho[v]) / gk.sigma[v])
        far = np.exp(-(2.0 - gk.rho[v]) / gk.sigma[v])
        assert near == pytest.approx(1.0)
        assert far < 1e-5
    w = {(int(u), int(v)): float(h) for u, v, h in zip(gk.sym_src, gk.sym_dst, gk.sym_w)}
    # unions: (0,1) = u(1,1) = 1; (0,2) = u(~0, 1) = 1 (absorbing); (1,2) = u(~0,~0) ~ 0
    assert w[(0, 1)] == pytest.approx(1.0)
    assert w[(0, 2)] == pytest.approx(1.0)
    assert w[(1, 2)] < 1e-4


def test_smooth_weights_all_identical_clamps_to_max():
    knn = DirectedKnn(
        n=2,
        k=2,
        indptr=np.array([0, 1, 2], dtype=np.int64),
        dst=np.array([1, 0], dtype=np.int32),
        dist=np.array([1, 1], dtype=np.int32),
    )
    gk = smooth_knn_weights(knn)
    assert gk.sigma[0] == SIGMA_MAX
    assert gk.sym_w[0] == pytest.approx(1.0)


def test_fuzzy_union_properties(rng):
    assert fuzzy_union(1.0, 0.0) == 1.0  # absorbing case
    for _ in range(200):
        a, b, c = rng.random(3)
        assert fuzzy_union(a, b) == pytest.approx(fuzzy_union(b, a))
        assert fuzzy_union(a, 0.0) == pytest.approx(a)
    for x in (0.0, 1.0):
        assert fuzzy_union(x, x) == x  # idempotent on {0, 1}
    # monotone in both arguments
    for _ in range(200):
        a1, a2, b = rng.random(3)
        lo, hi = min(a1, a2), max(a1, a2)
        assert fuzzy_union(lo, b) <= fuzzy_union(hi, b) + 1e-15


def test_symmetrized_weights_symmetric(rng):
    n, edges = random_connected_graph(rng, n_max=50)
    g = build_graph(edges)
    _, knn = partial_bfs(g, k=4, seed=9)
    gk = smooth_knn_weights(knn)
    w = {(int(u), int(v)): float(h) for u, v, h in zip(gk.sym_src, gk.sym_dst, gk.sym_w)}
    for (u, v), h in w.items():
        assert (v, u) in w
        assert w[(v, u)] == pytest.approx(h)
        assert 0.0 < h <= 1.0
