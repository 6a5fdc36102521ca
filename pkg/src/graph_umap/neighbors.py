"""Distance computation (full and partial BFS) and weighted kNN construction.

The full pipeline (all-pairs BFS -> kNN extraction) and the truncated one
(partial BFS, which yields the kNN edges as a byproduct) both feed
:func:`smooth_knn_weights`, which turns raw hop distances into a symmetrized
fuzzy-weighted neighbor graph.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._kernels import INF32, apsp_rows, partial_bfs_all

#: sentinel hop distance for unreachable pairs ("arbitrarily large")
UNREACHABLE = int(INF32)

SMOOTH_TOLERANCE = 1e-5
SIGMA_MIN = 1e-3
SIGMA_MAX = 1e3
SMOOTH_ITERATIONS = 64


@dataclass(frozen=True)
class SparseDistanceSet:
    """Hop distances from every vertex, stored densely (full) or truncated.

    Full mode keeps the whole n x n int32 matrix (``UNREACHABLE`` sentinel for
    disconnected pairs). Partial mode keeps, per vertex, its k nearest others
    as parallel (neighbor, distance) arrays sorted by (distance, id).
    """

    n: int
    full: bool
    matrix: np.ndarray = None
    indptr: np.ndarray = None
    nbr: np.ndarray = None
    dist: np.ndarray = None

    def row(self, v):
        """(neighbor ids, hop distances) for vertex ``v``, excluding ``v``."""
        if self.full:
            d = self.matrix[v]
            ids = np.flatnonzero((d != INF32) & (np.arange(self.n) != v))
            return ids, d[ids]
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.nbr[lo:hi], self.dist[lo:hi]


@dataclass(frozen=True)
class DirectedKnn:
    """Directed kNN edges grouped by source vertex (CSR-style arrays)."""

    n: int
    k: int
    indptr: np.ndarray
    dst: np.ndarray
    dist: np.ndarray

    @property
    def edge_count(self):
        return int(self.dst.shape[0])


@dataclass(frozen=True)
class KnnGraph:
    """Weighted kNN graph: raw directed edges plus the symmetrized fuzzy ones.

    ``sym_src``/``sym_dst``/``sym_w`` hold *both* orientations of every
    symmetrized pair (h_ij == h_ji), lexicographically sorted; that directed
    list is what the optimizers sweep. ``nbr_indptr``/``nbr_indices`` give the
    same structure as a CSR neighbor lookup (used for negative-sample
    rejection).
    """

    n: int
    k: int
    directed: DirectedKnn
    rho: np.ndarray
    sigma: np.ndarray
    sym_src: np.ndarray
    sym_dst: np.ndarray
    sym_w: np.ndarray
    nbr_indptr: np.ndarray
    nbr_indices: np.ndarray

    @property
    def edge_count(self):
        """Number of directed symmetrized edges (what the optimizers see)."""
        return int(self.sym_src.shape[0])

    def undirected_edges(self):
        """(u, v, d, h) arrays with u < v, one row per symmetrized pair."""
        mask = self.sym_src < self.sym_dst
        u = self.sym_src[mask]
        v = self.sym_dst[mask]
        h = self.sym_w[mask]
        d = _join_raw_distances(self.directed, u, v)
        return u, v, d, h


def _join_raw_distances(directed, u, v):
    """Raw hop distance for each (u, v) pair, taken from either orientation."""
    d_map = {}
    src = np.repeat(
        np.arange(directed.n), np.diff(directed.indptr)
    )
    for s, t, dd in zip(src, directed.dst, directed.dist):
        key = (int(s), int(t)) if s < t else (int(t), int(s))
        if key not in d_map:
            d_map[key] = int(dd)
    out = np.empty(u.shape[0], dtype=np.int32)
    for i in range(u.shape[0]):
        out[i] = d_map[(int(u[i]), int(v[i]))]
    return out


def all_pairs_bfs(g, chunk=1024):
    """Hop distances between all ordered pairs (the O(nm) baseline C0).

    Unreachable pairs receive the :data:`UNREACHABLE` sentinel. Work is done
    in source chunks to keep intermediate buffers small.
    """
    n = g.n
    out = np.empty((n, n), dtype=np.int32)
    indptr = g.adj_indptr
    indices = g.adj_indices
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        sources = np.arange(start, stop, dtype=np.int64)
        apsp_rows(indptr, indices, out[start:stop], sources)
    return SparseDistanceSet(n=n, full=True, matrix=out)


def partial_bfs(g, k, seed=0):
    """Truncated BFS per vertex: the k hop-nearest others, with distances.

    Ties at the stopping level are broken at random under ``seed`` (derived
    per-vertex streams, so runs are reproducible). Returns the partial
    distance set together with the directed kNN edges it already implies,
    which makes the separate kNN extraction step unnecessary.

    Vertices whose component holds fewer than k+1 vertices report everything
    reachable, with a warning.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = g.n
    k_eff = min(k, n - 1) if n > 1 else 0
    nbr = np.empty(n * max(k_eff, 1), dtype=np.int32)
    dist = np.empty(n * max(k_eff, 1), dtype=np.int32)
    counts = np.zeros(n, dtype=np.int32)
    if k_eff > 0:
        partial_bfs_all(
            g.adj_indptr, g.adj_indices, k_eff, np.uint64(seed), nbr, dist, counts
        )
    short = int(np.count_nonzero(counts < k_eff))
    if short:
        warnings.warn(
            f"{short} vertices live in components smaller than k+1; "
            "returning all reachable vertices for them",
            stacklevel=2,
        )
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    total = int(indptr[-1])
    packed_nbr = np.empty(total, dtype=np.int32)
    packed_dist = np.empty(total, dtype=np.int32)
    for v in range(n):
        lo = indptr[v]
        c = counts[v]
        packed_nbr[lo:lo + c] = nbr[v * k_eff:v * k_eff + c]
        packed_dist[lo:lo + c] = dist[v * k_eff:v * k_eff + c]
    dset = SparseDistanceSet(
        n=n, full=False, indptr=indptr, nbr=packed_nbr, dist=packed_dist
    )
    knn = DirectedKnn(n=n, k=k, indptr=indptr, dst=packed_nbr, dist=packed_dist)
    return dset, knn


def knn_from_full_distances(dist_set, k, seed=0):
    """Per-vertex k nearest others from a full distance set (C1).

    Ties at the kth distance are broken at random under ``seed`` (per-vertex
    derived streams). Unreachable vertices are never selected; vertices in
    components smaller than k+1 report everything reachable, with a warning.
    """
    if not dist_set.full:
        raise ValueError("knn_from_full_distances requires a full distance set")
    if k < 1:
        raise ValueError("k must be >= 1")
    n = dist_set.n
    matrix = dist_set.matrix
    dst_rows = []
    dist_rows = []
    short = 0
    for v in range(n):
        row = matrix[v].astype(np.int64, copy=True)
        row[v] = np.int64(INF32)
        reachable = np.flatnonzero(row != np.int64(INF32))
        if reachable.shape[0] <= k:
            chosen = reachable
            if reachable.shape[0] < k:
                short += 1
        else:
            vals = row[reachable]
            kth = np.partition(vals, k - 1)[k - 1]
            lower = reachable[vals < kth]
            ties = reachable[vals == kth]
            need = k - lower.shape[0]
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=seed, spawn_key=(v,))
            )
            picked = ties[rng.permutation(ties.shape[0])[:need]]
            chosen = np.concatenate([lower, picked])
        d = row[chosen].astype(np.int32)
        order = np.lexsort((chosen, d))
        dst_rows.append(chosen[order].astype(np.int32))
        dist_rows.append(d[order])
    if short:
        warnings.warn(
            f"{short} vertices live in components smaller than k+1; "
            "returning all reachable vertices for them",
            stacklevel=2,
        )
    counts = np.array([r.shape[0] for r in dst_rows], dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return DirectedKnn(
        n=n,
        k=k,
        indptr=indptr,
        dst=np.concatenate(dst_rows) if n else np.empty(0, np.int32),
        dist=np.concatenate(dist_rows) if n else np.empty(0, np.int32),
    )


def fuzzy_union(a, b):
    """Probabilistic t-conorm a + b - a*b used to symmetrize directed weights."""
    return a + b - a * b


def smooth_knn_weights(knn, k=None):
    """Fuzzy membership weights from raw kNN distances, then symmetrization.

    Per vertex i, rho_i is the distance to its nearest neighbor and sigma_i is
    found by binary search on (SIGMA_MIN, SIGMA_MAX) so that

        sum_j exp(-(d_ij - rho_i) / sigma_i) = log2(k)

    (64 iterations, absolute tolerance 1e-5). When every distance equals
    rho_i the sum is constant and sigma is clamped to the range maximum; when
    the target is otherwise unreachable sigma converges to the violated bound.
    Directed weights are then combined with the fuzzy union, producing a
    symmetric weighted edge list (both orientations materialized).
    """
    if k is None:
        k = knn.k
    n = knn.n
    counts = np.diff(knn.indptr)
    if np.any(counts < 1):
        raise ValueError("every vertex needs at least one outgoing kNN edge")
    kmax = int(counts.max())
    # pad rows to kmax with +inf so padded terms contribute exp(-inf) = 0
    dmat = np.full((n, kmax), np.inf)
    for v in range(n):
        lo, hi = knn.indptr[v], knn.indptr[v + 1]
        dmat[v, : hi - lo] = knn.dist[lo:hi]
    rho = dmat.min(axis=1)
    target = np.log2(k)

    def weight_sum(sigma):
        with np.errstate(over="ignore"):
            return np.exp(-(dmat - rho[:, None]) / sigma[:, None]).sum(axis=1)

    lo = np.full(n, SIGMA_MIN)
    hi = np.full(n, SIGMA_MAX)
    # all finite distances equal to rho: the sum is constant in sigma
    all_equal = np.all(np.isinf(dmat) | (dmat == rho[:, None]), axis=1)
    sigma = np.full(n, SIGMA_MAX)
    active = ~all_equal
    s_hi = weight_sum(hi)
    s_lo = weight_sum(lo)
    clamp_hi = active & (s_hi < target)
    clamp_lo = active & (s_lo > target)
    sigma[clamp_hi] = SIGMA_MAX
    sigma[clamp_lo] = SIGMA_MIN
    searching = active & ~clamp_hi & ~clamp_lo
    lo_s = lo.copy()
    hi_s = hi.copy()
    mid = (lo_s + hi_s) / 2.0
    live = searching.copy()
    for _ in range(SMOOTH_ITERATIONS):
        if not live.any():
            break
        s_mid = weight_sum(mid)
        done = live & (np.abs(s_mid - target) < SMOOTH_TOLERANCE)
        sigma[done] = mid[done]
        live = live & ~done
        too_high = live & (s_mid > target)
        too_low = live & ~too_high
        hi_s[too_high] = mid[too_high]
        lo_s[too_low] = mid[too_low]
        mid = np.where(live, (lo_s + hi_s) / 2.0, mid)
    sigma[live] = mid[live]

    with np.errstate(over="ignore"):
        wmat = np.exp(-(dmat - rho[:, None]) / sigma[:, None])
    wmat[np.isinf(dmat)] = 0.0

    rows = np.repeat(np.arange(n), counts)
    cols = knn.dst.astype(np.int64)
    vals = np.empty(cols.shape[0])
    for v in range(n):
        lo2, hi2 = knn.indptr[v], knn.indptr[v + 1]
        vals[lo2:hi2] = wmat[v, : hi2 - lo2]

    # deduplicate directed pairs before the union (coo_matrix sums duplicates)
    keys = rows * n + cols
    _, first = np.unique(keys, return_index=True)
    rows, cols, vals = rows[first], cols[first], vals[first]

    w = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    wt = w.T.tocsr()
    sym = w + wt - w.multiply(wt)
    sym = sym.tocoo()
    order = np.lexsort((sym.col, sym.row))
    sym_src = sym.row[order].astype(np.int32)
    sym_dst = sym.col[order].astype(np.int32)
    sym_w = sym.data[order].astype(np.float64)

    sym_csr = sp.csr_matrix(
        (np.ones(sym_src.shape[0]), (sym_src, sym_dst)), shape=(n, n)
    )
    sym_csr.sort_indices()

    return KnnGraph(
        n=n,
        k=k,
        directed=knn,
        rho=rho,
        sigma=sigma,
        sym_src=sym_src,
        sym_dst=sym_dst,
        sym_w=sym_w,
        nbr_indptr=sym_csr.indptr.astype(np.int64),
        nbr_indices=sym_csr.indices.astype(np.int32),
    )
