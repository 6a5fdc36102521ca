"""Independently coded brute-force oracles for the test suite.

Everything here is written straight from first principles (double/triple
loops, dense pseudoinverse, exact rational arithmetic) and deliberately does
not share code with the package implementations it checks.
"""

from fractions import Fraction

import numpy as np


def floyd_warshall(n, edges):
    """Dense all-pairs hop distances, O(n^3); inf for unreachable."""
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in edges:
        d[u, v] = 1.0
        d[v, u] = 1.0
    for k in range(n):
        d = np.minimum(d, d[:, k, None] + d[None, k, :])
    return d


def bfs_distances(adj_lists, source):
    """Single-source hop distances by a literal queue BFS; dict of reachable."""
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj_lists[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def resistance_pinv(n, edges):
    """Effective resistance per edge from the dense Laplacian pseudoinverse."""
    lap = np.zeros((n, n))
    for u, v in edges:
        lap[u, u] += 1.0
        lap[v, v] += 1.0
        lap[u, v] -= 1.0
        lap[v, u] -= 1.0
    pinv = np.linalg.pinv(lap)
    out = []
    for u, v in edges:
        e = np.zeros(n)
        e[u], e[v] = 1.0, -1.0
        out.append(float(e @ pinv @ e))
    return np.array(out)


def max_spanning_tree_weight(n, edges, weights):
    """Total weight of a maximum spanning tree (Kruskal, simple union-find)."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = sorted(range(len(edges)), key=lambda i: -weights[i])
    total = 0.0
    joined = 0
    for i in order:
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            total += weights[i]
            joined += 1
            if joined == n - 1:
                break
    assert joined == n - 1, "graph must be connected"
    return total


def neighborhood_preservation_ref(n, edges, coords, r=2):
    """Literal mean-Jaccard double loop over vertices."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    total = 0.0
    for v in range(n):
        dist = bfs_distances(adj, v)
        hood = {u for u, d in dist.items() if 0 < d <= r}
        q = len(hood)
        if q == 0:
            total += 1.0
            continue
        others = [u for u in range(n) if u != v]
        others.sort(key=lambda u: (np.hypot(*(coords[u] - coords[v])), u))
        geo = set(others[:q])
        total += len(hood & geo) / len(hood | geo)
    return total / n


def stress_ref(n, edges, coords, rescale=True):
    """Literal aggregated-stress double loop with the optimal uniform scale."""
    hop = floyd_warshall(n, edges)
    num = den = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            delta = float(np.hypot(*(coords[i] - coords[j])))
            num += delta / hop[i, j]
            den += delta * delta / (hop[i, j] ** 2)
    s = num / den if (rescale and den > 0) else 1.0
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            delta = s * float(np.hypot(*(coords[i] - coords[j])))
            total += ((hop[i, j] - delta) / hop[i, j]) ** 2
    return total / (n * n - n)


def _orient(pa, pb, pc):
    ax, ay = Fraction(pa[0]), Fraction(pa[1])
    bx, by = Fraction(pb[0]), Fraction(pb[1])
    cx, cy = Fraction(pc[0]), Fraction(pc[1])
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def segments_cross_open(p1, p2, p3, p4):
    """Do the open segments intersect? Exact rational arithmetic."""
    o1 = _orient(p1, p2, p3)
    o2 = _orient(p1, p2, p4)
    o3 = _orient(p3, p4, p1)
    o4 = _orient(p3, p4, p2)
    if 0 not in (o1, o2, o3, o4):
        return o1 != o2 and o3 != o4
    if o1 == o2 == o3 == o4 == 0:
        if Fraction(p1[0]) != Fraction(p2[0]):
            axis = 0
        else:
            axis = 1
        a_lo, a_hi = sorted((Fraction(p1[axis]), Fraction(p2[axis])))
        b_lo, b_hi = sorted((Fraction(p3[axis]), Fraction(p4[axis])))
        return max(a_lo, b_lo) < min(a_hi, b_hi)
    return False


def count_crossings_ref(edges, coords):
    """O(m^2) exact crossing count; shared endpoints never counted."""
    m = len(edges)
    count = 0
    for i in range(m):
        a, b = edges[i]
        for j in range(i + 1, m):
            c, d = edges[j]
            if a in (c, d) or b in (c, d):
                continue
            if segments_cross_open(coords[a], coords[b], coords[c], coords[d]):
                count += 1
    return count


def rng_edges_ref(coords):
    """Relative neighborhood graph, literal O(n^3) triple loop."""
    n = len(coords)
    out = set()
    for u in range(n):
        for v in range(u + 1, n):
            duv = float(np.hypot(*(coords[u] - coords[v])))
            ok = True
            for w in range(n):
                if w in (u, v):
                    continue
                dw = max(
                    float(np.hypot(*(coords[u] - coords[w]))),
                    float(np.hypot(*(coords[v] - coords[w]))),
                )
                if dw < duv:
                    ok = False
                    break
            if ok:
                out.add((u, v))
    return out


def central_difference(f, x, eps=1e-6):
    """Central finite-difference gradient of a scalar function of a vector."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for i in range(x.shape[0]):
        hi = x.copy()
        lo = x.copy()
        hi[i] += eps
        lo[i] -= eps
        grad[i] = (f(hi) - f(lo)) / (2 * eps)
    return grad


def random_connected_graph(rng, n_max=200, extra_edges=1.6):
    """Random connected simple graph: a random spanning tree plus extras.

    Returns (n, edge list). Connectivity holds by construction.
    """
    n = int(rng.integers(5, n_max + 1))
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        u = int(order[i])
        v = int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    target_extra = int(extra_edges * n)
    for _ in range(target_extra * 3):
        if len(edges) >= n - 1 + target_extra:
            break
        u = int(rng.integers(0, n))
        v = int(rng.integers(0, n))
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return n, sorted(edges)
