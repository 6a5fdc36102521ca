"""Deterministic synthetic graph fixtures: grid, scale-free, random-regular."""

import math
from collections import Counter

import numpy as np

from .graph import GraphError, build_graph


def _grid(n):
    rows = int(math.isqrt(n))
    cols = (n + rows - 1) // rows
    edges = []
    for v in range(n):
        r, c = divmod(v, cols)
        if c + 1 < cols and v + 1 < n and (v + 1) // cols == r:
            edges.append((v, v + 1))
        down = (r + 1) * cols + c
        if down < n:
            edges.append((v, down))
    return edges


def _scale_free(n, m0, rng):
    # preferential attachment seeded from a complete graph on m0+1 vertices
    if n < m0 + 2:
        raise GraphError("scale_free needs n >= m0 + 2")
    edges = []
    repeated = []
    core = m0 + 1
    for u in range(core):
        for v in range(u + 1, core):
            edges.append((u, v))
            repeated.append(u)
            repeated.append(v)
    for v in range(core, n):
        targets = set()
        while len(targets) < m0:
            t = repeated[rng.integers(0, len(repeated))]
            targets.add(int(t))
        for t in sorted(targets):
            edges.append((t, v))
            repeated.append(t)
            repeated.append(v)
    return edges


def _pair_stubs(n, d, rng):
    stubs = np.repeat(np.arange(n), d)
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2)


def _random_regular(n, d, rng):
    """Configuration model with random edge-swap repair of loops/multi-edges.

    Swaps preserve the degree sequence; a multiset of live edge keys keeps the
    repair bookkeeping exact even when a swap fixes several pairs at once.
    """
    if (n * d) % 2 != 0:
        raise GraphError("random_regular infeasible: n*d must be even")
    if d < 1 or d >= n:
        raise GraphError("random_regular needs 1 <= d < n")

    def key(u, v):
        return (u, v) if u < v else (v, u)

    for _attempt in range(30):
        pairs = [tuple(int(x) for x in p) for p in _pair_stubs(n, d, rng)]
        m = len(pairs)
        counts = Counter(key(u, v) for u, v in pairs)

        def is_bad(i):
            u, v = pairs[i]
            return u == v or counts[key(u, v)] > 1

        failed = False
        for _sweep in range(50):
            bad = [i for i in range(m) if is_bad(i)]
            if not bad:
                return pairs
            for i in bad:
                if not is_bad(i):
                    continue
                for _try in range(400):
                    j = int(rng.integers(0, m))
                    if j == i:
                        continue
                    u, v = pairs[i]
                    x, y = pairs[j]
                    if u == y or x == v:
                        continue
                    k1, k2 = key(u, y), key(x, v)
                    counts[key(u, v)] -= 1
                    counts[key(x, y)] -= 1
                    if k1 != k2 and counts[k1] == 0 and counts[k2] == 0:
                        pairs[i] = (u, y)
                        pairs[j] = (x, v)
                        counts[k1] += 1
                        counts[k2] += 1
                        break
                    counts[key(u, v)] += 1
                    counts[key(x, y)] += 1
                else:
                    failed = True
                    break
            if failed:
                break
        # fall through to a fresh attempt
    raise GraphError("random_regular: repair did not converge")


def synth_graph(kind, n, seed=0, **params):
    """Deterministic synthetic graph of the requested family.

    kind="grid": sqrt(n) x ceil(n/sqrt(n)) mesh with exactly n vertices.
    kind="scale_free": preferential attachment, ``m0`` edges per new vertex
    (seed core: complete graph on m0+1 vertices).
    kind="random_regular": configuration model with swap repair, degree ``d``;
    retried with derived seeds until connected.
    """
    if n < 3:
        raise GraphError("synthetic graphs need n >= 3")
    rng = np.random.default_rng(seed)
    if kind == "grid":
        edges = _grid(n)
        return build_graph(edges)
    if kind == "scale_free":
        m0 = int(params.get("m0", 2))
        if m0 < 1:
            raise GraphError("scale_free needs m0 >= 1")
        return build_graph(_scale_free(n, m0, rng))
    if kind == "random_regular":
        d = int(params.get("d", 3))
        for attempt in range(20):
            sub = np.random.default_rng(
                np.random.SeedSequence(entropy=seed, spawn_key=(attempt,))
            )
            g = build_graph(_random_regular(n, d, sub))
            if g.is_connected():
                return g
        raise GraphError("random_regular: no connected sample found")
    raise GraphError(f"unknown synthetic kind {kind!r}")
