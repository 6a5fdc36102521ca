"""Layout quality metrics: neighborhood preservation, stress, crossings,
and the proximity-graph shape score."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.spatial import QhullError, Delaunay
from scipy.spatial.distance import cdist

from ._kernels import INF32, count_crossings_filtered, rng_edges_brute
from .neighbors import all_pairs_bfs


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricReport:
    neighborhood_preservation: float = None
    stress: float = None
    crossings: int = None
    shape_jaccard: float = None

    def as_dict(self):
        return {
            "np": self.neighborhood_preservation,
            "stress": self.stress,
            "crossings": self.crossings,
            "shape": self.shape_jaccard,
        }


def _check(g, layout):
    if layout.n != g.n:
        raise MetricError("layout does not match graph")


def neighborhood_preservation(g, layout, r=2):
    """Mean Jaccard overlap between r-hop and geometric neighborhoods.

    For each vertex v, N_G(v, r) is the set of vertices within r hops
    (excluding v) and N_D(v, r) the |N_G(v, r)| Euclidean-nearest other
    vertices in the drawing, distance ties broken by vertex id. Returns the
    mean over vertices of |intersection| / |union|, in [0, 1].
    """
    _check(g, layout)
    n = g.n
    if n <= 1:
        return 1.0
    adj = g.to_csr(dtype=bool)
    reach = adj.copy()
    power = adj
    for _ in range(r - 1):
        power = (power @ adj).astype(bool)
        reach = (reach + power).astype(bool)
    reach = sp.csr_matrix(reach)
    reach.setdiag(False)
    reach.eliminate_zeros()
    reach.sort_indices()

    coords = layout.coords
    total = 0.0
    chunk = max(1, min(512, n))
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        dists = cdist(coords[start:stop], coords)
        for v in range(start, stop):
            hood = reach.indices[reach.indptr[v]:reach.indptr[v + 1]]
            q = hood.shape[0]
            if q == 0:
                total += 1.0
                continue
            row = dists[v - start].copy()
            row[v] = np.inf
            # stable sort: equal distances resolve in ascending-id order
            nearest = np.argsort(row, kind="stable")[:q]
            inter = np.intersect1d(hood, nearest, assume_unique=True).shape[0]
            total += inter / (2 * q - inter)
    return total / n


def _hop_distance_matrix(g):
    dset = all_pairs_bfs(g)
    m = dset.matrix
    if np.any(m == INF32):
        raise MetricError("stress requires a connected graph")
    return m.astype(np.float64)


def stress(g, layout, rescale=True):
    """Mean squared relative deviation of layout distances from hop distances.

    Computed over all ordered pairs i != j and divided by n^2 - n. Before
    evaluation the layout is scaled by the closed-form optimal factor
    s* = sum(delta/d) / sum(delta^2/d^2) (disable with ``rescale=False``),
    so the value is invariant to the arbitrary drawing units.
    """
    _check(g, layout)
    n = g.n
    if n < 2:
        return 0.0
    hop = _hop_distance_matrix(g)
    coords = layout.coords
    chunk = max(1, min(1024, n))

    s_num = 0.0
    s_den = 0.0
    if rescale:
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            delta = cdist(coords[start:stop], coords)
            d = hop[start:stop].copy()
            np.fill_diagonal(d[:, start:stop], np.inf)  # drop i == j terms
            s_num += float((delta / d).sum())
            s_den += float((delta * delta / (d * d)).sum())
        scale = s_num / s_den if s_den > 0 else 1.0
    else:
        scale = 1.0

    total = 0.0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        delta = cdist(coords[start:stop], coords) * scale
        d = hop[start:stop].copy()
        np.fill_diagonal(d[:, start:stop], np.inf)
        term = (1.0 - delta / d) ** 2  # == ((d - delta)/d)^2 for finite d
        np.fill_diagonal(term[:, start:stop], 0.0)
        total += float(term.sum())
    return total / (n * n - n)


def _orient_exact(pa, pb, pc):
    ax, ay = (Fraction(pa[0]), Fraction(pa[1]))
    bx, by = (Fraction(pb[0]), Fraction(pb[1]))
    cx, cy = (Fraction(pc[0]), Fraction(pc[1]))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def _open_segments_cross_exact(p1, p2, p3, p4):
    """Exact predicate: do the *open* segments share a point?

    Proper straddling counts; endpoint touches and T-junctions do not;
    collinear segments count iff their open intervals overlap.
    """
    o1 = _orient_exact(p1, p2, p3)
    o2 = _orient_exact(p1, p2, p4)
    o3 = _orient_exact(p3, p4, p1)
    o4 = _orient_exact(p3, p4, p2)
    if o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return o1 != o2 and o3 != o4
    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        # collinear: compare open parameter intervals along the dominant axis
        axis = 0 if abs(Fraction(p2[0]) - Fraction(p1[0])) >= abs(
            Fraction(p2[1]) - Fraction(p1[1])
        ) else 1
        a_lo, a_hi = sorted((Fraction(p1[axis]), Fraction(p2[axis])))
        b_lo, b_hi = sorted((Fraction(p3[axis]), Fraction(p4[axis])))
        return max(a_lo, b_lo) < min(a_hi, b_hi)
    return False  # some collinear endpoint: meeting point is not interior to both


def count_crossings(g, layout):
    """Number of unordered edge pairs whose open segments properly intersect.

    Pairs sharing an endpoint are never counted; collinear overlaps count once
    per pair. Orientation tests use a float filter backed by exact rational
    arithmetic near degeneracy, so the count is exact.
    """
    _check(g, layout)
    if g.m < 2:
        return 0
    edges = np.ascontiguousarray(g.edges, dtype=np.int64)
    coords = layout.coords
    cap = 4096
    while True:
        buf = np.empty((cap, 2), dtype=np.int64)
        certain, n_amb = count_crossings_filtered(edges, coords, buf)
        if n_amb <= cap:
            break
        cap = n_amb
    extra = 0
    for i, j in buf[:n_amb]:
        a, b = edges[i]
        c, d = edges[j]
        if _open_segments_cross_exact(coords[a], coords[b], coords[c], coords[d]):
            extra += 1
    return int(certain) + extra


def _rng_edges(points):
    """Relative neighborhood graph edge set of a 2-D point set.

    Small or degenerate inputs use the O(n^3) definition directly; larger
    ones filter Delaunay candidates (RNG is a subgraph of the Delaunay
    triangulation for points in general position).
    """
    n = points.shape[0]
    if n <= 300:
        return rng_edges_brute(points)
    try:
        tri = Delaunay(points)
    except QhullError:
        return rng_edges_brute(points)
    cand = set()
    for simplex in tri.simplices:
        for i in range(3):
            u, v = simplex[i], simplex[(i + 1) % 3]
            cand.add((min(u, v), max(u, v)))
    keep = []
    for u, v in sorted(cand):
        diff = points - points[u]
        du = np.einsum("ij,ij->i", diff, diff)
        diff = points - points[v]
        dv = np.einsum("ij,ij->i", diff, diff)
        duv = du[v]
        lune = np.maximum(du, dv) < duv
        lune[u] = lune[v] = False
        if not lune.any():
            keep.append((u, v))
    return np.array(keep, dtype=np.int64).reshape(-1, 2)


def shape_metric(g, layout, variant="rng", jitter_seed=0):
    """Jaccard similarity between the graph edges and a proximity graph of
    the drawn points.

    ``variant="rng"`` (default) uses the relative neighborhood graph;
    ``"drng"`` post-processes it with a degree-sensitive trim: proximity
    edges are dropped longest-first at any endpoint whose proximity degree
    exceeds its graph degree (an implementation-defined reading of the
    degree-sensitive variant). Coincident layout points are perturbed by a
    seeded jitter of 1e-9 of the extent first.
    """
    _check(g, layout)
    points = layout.coords.copy()
    n = g.n
    uniq = np.unique(points, axis=0)
    if uniq.shape[0] < n:
        extent = max(float(np.ptp(points)), 1.0)
        rng_jitter = np.random.default_rng(jitter_seed)
        points = points + rng_jitter.standard_normal((n, 2)) * (1e-9 * extent)

    prox = _rng_edges(points)
    if variant == "drng":
        prox = _degree_sensitive_trim(g, points, prox)
    elif variant != "rng":
        raise ValueError(f"unknown shape variant {variant!r}")

    g_set = {(int(u), int(v)) for u, v in g.edges}
    p_set = {(int(u), int(v)) for u, v in prox}
    inter = len(g_set & p_set)
    union = len(g_set | p_set)
    return inter / union if union else 1.0


def _degree_sensitive_trim(g, points, prox):
    if prox.shape[0] == 0:
        return prox
    deg_g = g.degrees
    deg_p = np.zeros(g.n, dtype=np.int64)
    for u, v in prox:
        deg_p[u] += 1
        deg_p[v] += 1
    lengths = np.linalg.norm(points[prox[:, 0]] - points[prox[:, 1]], axis=1)
    order = np.lexsort((prox[:, 1], prox[:, 0], -lengths))
    keep = np.ones(prox.shape[0], dtype=bool)
    for idx in order:
        u, v = prox[idx]
        if deg_p[u] > deg_g[u] or deg_p[v] > deg_g[v]:
            keep[idx] = False
            deg_p[u] -= 1
            deg_p[v] -= 1
    return prox[keep]


def improvement(baseline, candidate, higher_is_better=False):
    """Signed relative difference against a baseline.

    For lower-is-better quantities (time, stress, crossings):
    (baseline - candidate) / baseline, so +0.8 means "80% faster".
    For higher-is-better ones the numerator is reversed.
    """
    if baseline <= 0:
        raise ValueError("improvement requires a positive baseline")
    if higher_is_better:
        return (candidate - baseline) / baseline
    return (baseline - candidate) / baseline


def compute_metrics(g, layout, which=("np", "stress", "crossings", "shape"),
                    r=2, shape_variant="rng"):
    """Evaluate the requested metrics into a :class:`MetricReport`."""
    np_val = stress_val = cross_val = shape_val = None
    if "np" in which:
        np_val = neighborhood_preservation(g, layout, r=r)
    if "stress" in which:
        stress_val = stress(g, layout)
    if "crossings" in which:
        cross_val = count_crossings(g, layout)
    if "shape" in which:
        shape_val = shape_metric(g, layout, variant=shape_variant)
    return MetricReport(
        neighborhood_preservation=np_val,
        stress=stress_val,
        crossings=cross_val,
        shape_jaccard=shape_val,
    )
