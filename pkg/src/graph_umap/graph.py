"""Core graph and layout value types shared by every pipeline stage."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

ALGORITHMS = ("GUMAP", "SS", "SL", "SSSL", "SPECTRAL_INIT", "RANDOM")


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with dense vertex ids 0..n-1.

    Adjacency is stored in CSR form (``adj_indptr``/``adj_indices``, neighbor
    lists sorted ascending) next to the canonical edge array ``edges`` of shape
    (m, 2) with u < v per row. ``labels`` keeps the original vertex names for
    output; ``dropped_self_loops``/``dropped_duplicates`` count what
    :func:`build_graph` discarded.
    """

    n: int
    m: int
    adj_indptr: np.ndarray
    adj_indices: np.ndarray
    edges: np.ndarray
    labels: tuple = ()
    dropped_self_loops: int = 0
    dropped_duplicates: int = 0

    def __post_init__(self):
        self.adj_indptr.setflags(write=False)
        self.adj_indices.setflags(write=False)
        self.edges.setflags(write=False)

    def neighbors(self, v):
        """Sorted neighbor ids of vertex ``v`` (a read-only view)."""
        return self.adj_indices[self.adj_indptr[v]:self.adj_indptr[v + 1]]

    @property
    def adjacency(self):
        """Per-vertex sorted neighbor lists (read-only array views)."""
        return [self.neighbors(v) for v in range(self.n)]

    def degree(self, v):
        return int(self.adj_indptr[v + 1] - self.adj_indptr[v])

    @property
    def degrees(self):
        return np.diff(self.adj_indptr)

    def to_csr(self, dtype=np.float64):
        """Adjacency as a scipy CSR matrix with unit weights."""
        data = np.ones(self.adj_indices.shape[0], dtype=dtype)
        return sp.csr_matrix(
            (data, self.adj_indices, self.adj_indptr), shape=(self.n, self.n)
        )

    def is_connected(self):
        if self.n <= 1:
            return True
        ncomp, _ = csgraph.connected_components(self.to_csr(), directed=False)
        return ncomp == 1

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Layout:
    """Per-vertex 2-D coordinates plus the provenance that produced them."""

    coords: np.ndarray
    algorithm_tag: str = "RANDOM"
    seed: int = 0
    iterations: int = 0

    def __post_init__(self):
        coords = np.ascontiguousarray(np.asarray(self.coords, dtype=np.float64))
        if coords.ndim != 2 or coords.shape[1] != 2:
            raise ValueError("layout coordinates must have shape (n, 2)")
        if not np.all(np.isfinite(coords)):
            raise ValueError("layout coordinates must be finite")
        if self.algorithm_tag not in ALGORITHMS:
            raise ValueError(f"unknown algorithm tag {self.algorithm_tag!r}")
        object.__setattr__(self, "coords", coords)
        coords.setflags(write=False)

    @property
    def n(self):
        return self.coords.shape[0]


@dataclass(frozen=True)
class EdgeWeighted:
    """One weighted edge (effective resistance or fuzzy membership)."""

    u: int
    v: int
    weight: float

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("weighted edge endpoints must differ")
        if not (np.isfinite(self.weight) and self.weight >= 0.0):
            raise ValueError("edge weight must be finite and non-negative")


def _from_canonical(n, edges, labels):
    """Assemble a Graph from already-dense ids and deduplicated u<v edges."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    m = edges.shape[0]
    if m:
        both = np.concatenate([edges, edges[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, both[:, 0] + 1, 1)
        indptr = np.cumsum(indptr)
        indices = both[:, 1].astype(np.int32)
    else:
        indptr = np.zeros(n + 1, dtype=np.int64)
        indices = np.empty(0, dtype=np.int32)
    return n, m, indptr, indices, edges


def build_graph(edge_pairs, labels=None):
    """Build a canonical :class:`Graph` from raw (id, id) pairs.

    Ids may be arbitrary non-negative integers or strings; they are relabeled
    densely to 0..n-1 in sorted order of the original labels. Self-loops and
    duplicate edges are dropped (counted on the result).

    Raises
    ------
    GraphError
        If no edges survive cleaning ("empty graph").
    """
    pairs = list(edge_pairs)
    if not pairs:
        raise GraphError("empty graph")

    seen = set()
    for u, v in pairs:
        seen.add(u)
        seen.add(v)
    try:
        ordered = sorted(seen)
    except TypeError as exc:
        raise GraphError("vertex ids must be mutually comparable") from exc
    index = {label: i for i, label in enumerate(ordered)}
    n = len(ordered)

    canon = set()
    dropped_loops = 0
    dropped_dups = 0
    for u, v in pairs:
        iu, iv = index[u], index[v]
        if iu == iv:
            dropped_loops += 1
            continue
        key = (iu, iv) if iu < iv else (iv, iu)
        if key in canon:
            dropped_dups += 1
            continue
        canon.add(key)
    if not canon:
        raise GraphError("empty graph")

    edges = np.array(sorted(canon), dtype=np.int64)
    n, m, indptr, indices, edges = _from_canonical(n, edges, ordered)
    return Graph(
        n=n,
        m=m,
        adj_indptr=indptr,
        adj_indices=indices,
        edges=edges,
        labels=tuple(ordered),
        dropped_self_loops=dropped_loops,
        dropped_duplicates=dropped_dups,
    )


def subgraph_with_edges(g, edge_subset):
    """Graph on the same vertex set (same ids/labels) keeping only ``edge_subset``.

    ``edge_subset`` is an array of canonical (u, v) rows taken from ``g.edges``.
    """
    n, m, indptr, indices, edges = _from_canonical(g.n, edge_subset, g.labels)
    return Graph(
        n=g.n, m=m, adj_indptr=indptr, adj_indices=indices, edges=edges,
        labels=g.labels,
    )


def largest_connected_component(g):
    """Induced subgraph on the largest component, densely relabeled.

    Ties between equal-size components are broken in favor of the component
    containing the smallest original vertex label. Idempotent.
    """
    ncomp, member = csgraph.connected_components(g.to_csr(), directed=False)
    if ncomp <= 1:
        return g
    sizes = np.bincount(member, minlength=ncomp)
    best = np.flatnonzero(sizes == sizes.max())
    if len(best) > 1:
        labels = g.labels if g.labels else tuple(range(g.n))
        champion = min(best, key=lambda c: min(labels[v] for v in np.flatnonzero(member == c)))
    else:
        champion = best[0]

    keep = np.flatnonzero(member == champion)
    remap = -np.ones(g.n, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    mask = (member[g.edges[:, 0]] == champion)
    edges = remap[g.edges[mask]]
    edges.sort(axis=1)
    old_labels = g.labels if g.labels else tuple(range(g.n))
    labels = tuple(old_labels[v] for v in keep)
    n2, m2, indptr, indices, edges = _from_canonical(len(keep), edges, labels)
    return Graph(
        n=n2, m=m2, adj_indptr=indptr, adj_indices=indices, edges=edges,
        labels=labels,
        dropped_self_loops=g.dropped_self_loops,
        dropped_duplicates=g.dropped_duplicates,
    )
