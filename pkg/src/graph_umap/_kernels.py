"""Numba kernels for the hot loops: BFS, partial BFS, SGD updates, crossings.

Everything here is sequential and deterministic given its seed arguments;
random draws come from an explicit splitmix64 state so results are
reproducible across processes.
"""

import numba
import numpy as np

INF32 = np.int32(np.iinfo(np.int32).max)

_SPLIT_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_SPLIT_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_SPLIT_MUL2 = np.uint64(0x94D049BB133111EB)


@numba.njit(inline="always")
def _next_u64(state):
    # splitmix64: state is a length-1 uint64 array used as the counter
    state[0] = state[0] + _SPLIT_GAMMA
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _SPLIT_MUL1
    z = (z ^ (z >> np.uint64(27))) * _SPLIT_MUL2
    return z ^ (z >> np.uint64(31))


@numba.njit(inline="always")
def _next_float(state):
    return (_next_u64(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@numba.njit(cache=True)
def apsp_rows(indptr, indices, out, sources):
    """BFS hop distances from each vertex in ``sources`` into rows of ``out``.

    Unreachable entries are left at INF32. ``out`` has one row per source.
    """
    n = indptr.shape[0] - 1
    queue = np.empty(n, np.int32)
    for si in range(sources.shape[0]):
        s = sources[si]
        row = out[si]
        row[:] = INF32
        row[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            du = row[u] + np.int32(1)
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if row[v] == INF32:
                    row[v] = du
                    queue[tail] = v
                    tail += 1


@numba.njit(cache=True)
def partial_bfs_all(indptr, indices, k, seed, nbr_out, dist_out, counts_out):
    """Truncated BFS from every vertex: the k hop-nearest others, ties random.

    Levels are expanded whole until a level would overflow the remaining
    budget; that last level is subsampled uniformly (partial Fisher-Yates
    driven by a per-source splitmix64 stream derived from ``seed``). Each
    vertex's entries are finally sorted by (distance, id). ``counts_out[v]``
    is the number of recorded neighbors (< k only when the component is
    smaller than k+1).
    """
    n = indptr.shape[0] - 1
    stamp = np.full(n, -1, np.int64)
    cur = np.empty(n, np.int32)
    nxt = np.empty(n, np.int32)
    state = np.empty(1, np.uint64)
    for s in range(n):
        state[0] = np.uint64(seed) + _SPLIT_GAMMA * np.uint64(s + 1)
        stamp[s] = s
        cur[0] = s
        cur_size = 1
        depth = np.int32(0)
        count = 0
        while count < k and cur_size > 0:
            nxt_size = 0
            for ci in range(cur_size):
                u = cur[ci]
                for p in range(indptr[u], indptr[u + 1]):
                    w = indices[p]
                    if stamp[w] != s:
                        stamp[w] = s
                        nxt[nxt_size] = w
                        nxt_size += 1
            depth += np.int32(1)
            if nxt_size == 0:
                break
            remaining = k - count
            take = nxt_size
            if nxt_size > remaining:
                # random subset of the level that crosses the budget
                for i in range(remaining):
                    j = i + np.int64(_next_u64(state) % np.uint64(nxt_size - i))
                    tmp = nxt[i]
                    nxt[i] = nxt[j]
                    nxt[j] = tmp
                take = remaining
            base = s * k
            for i in range(take):
                nbr_out[base + count + i] = nxt[i]
                dist_out[base + count + i] = depth
            count += take
            cur_size = nxt_size
            tmp_arr = cur
            cur = nxt
            nxt = tmp_arr
        counts_out[s] = count
        # canonical storage order: by (distance, id)
        base = s * k
        key = np.empty(count, np.int64)
        for i in range(count):
            key[i] = np.int64(dist_out[base + i]) * np.int64(n) + np.int64(
                nbr_out[base + i]
            )
        order = np.argsort(key)
        tmp_n = np.empty(count, np.int32)
        tmp_d = np.empty(count, np.int32)
        for i in range(count):
            tmp_n[i] = nbr_out[base + order[i]]
            tmp_d[i] = dist_out[base + order[i]]
        for i in range(count):
            nbr_out[base + i] = tmp_n[i]
            dist_out[base + i] = tmp_d[i]


@numba.njit(inline="always")
def _clip4(x):
    if x > 4.0:
        return 4.0
    if x < -4.0:
        return -4.0
    return x


@numba.njit(inline="always")
def _is_neighbor(nbr_indptr, nbr_indices, u, c):
    lo = nbr_indptr[u]
    hi = nbr_indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        if nbr_indices[mid] < c:
            lo = mid + 1
        elif nbr_indices[mid] > c:
            hi = mid
        else:
            return True
    return False


@numba.njit(cache=True)
def sgd_sweep(
    coords,
    e_src,
    e_dst,
    e_w,
    order,
    nbr_indptr,
    nbr_indices,
    a,
    b,
    lr,
    n_neg,
    state,
):
    """One pass of per-edge SGD updates in the order given by ``order``.

    Each visit applies the membership-weighted attractive move to both
    endpoints and ``n_neg`` repulsive moves of the head against uniformly
    sampled non-neighbors (rejection against the symmetrized neighbor lists;
    a sample is abandoned after 8 failed draws). Per-component gradient terms
    are clipped to [-4, 4] before the learning-rate scaling. Coincident points
    in a repulsive pair are separated along a seeded random unit direction.
    """
    n = coords.shape[0]
    for i in range(order.shape[0]):
        e = order[i]
        u = e_src[e]
        v = e_dst[e]
        h = e_w[e]
        dx = coords[u, 0] - coords[v, 0]
        dy = coords[u, 1] - coords[v, 1]
        d2 = dx * dx + dy * dy
        if d2 > 0.0:
            pb = d2**b
            g = -2.0 * a * b * h * (pb / d2) / (a * pb + 1.0)
            gx = _clip4(g * dx)
            gy = _clip4(g * dy)
            coords[u, 0] += lr * gx
            coords[u, 1] += lr * gy
            coords[v, 0] -= lr * gx
            coords[v, 1] -= lr * gy
        for _ in range(n_neg):
            c = np.int64(-1)
            for _try in range(8):
                cand = np.int64(_next_u64(state) % np.uint64(n))
                if cand == u:
                    continue
                if not _is_neighbor(nbr_indptr, nbr_indices, u, cand):
                    c = cand
                    break
            if c < 0:
                continue
            dx = coords[u, 0] - coords[c, 0]
            dy = coords[u, 1] - coords[c, 1]
            d2 = dx * dx + dy * dy
            if d2 > 0.0:
                g = 2.0 * b / ((0.001 + d2) * (a * d2**b + 1.0))
                gx = _clip4(g * dx)
                gy = _clip4(g * dy)
            else:
                theta = _next_float(state) * 6.283185307179586
                gx = 4.0 * np.cos(theta)
                gy = 4.0 * np.sin(theta)
            coords[u, 0] += lr * gx
            coords[u, 1] += lr * gy


# conservative static filter for the 2-D orientation determinant; pairs whose
# determinant falls below it are re-checked with exact rational arithmetic
_ORIENT_EPS = 4e-16


@numba.njit(inline="always")
def _orient_filtered(ax, ay, bx, by, cx, cy):
    t1 = (bx - ax) * (cy - ay)
    t2 = (by - ay) * (cx - ax)
    det = t1 - t2
    bound = _ORIENT_EPS * (abs(t1) + abs(t2))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    return 0  # zero or uncertain


@numba.njit(cache=True)
def count_crossings_filtered(edges, coords, ambiguous_out):
    """Count certainly-crossing edge pairs; collect uncertain pairs.

    Returns (certain_count, n_ambiguous). Pairs sharing a vertex id are never
    counted. A pair is certain iff all four orientation tests pass the float
    error filter; anything near-degenerate lands in ``ambiguous_out`` for an
    exact re-check by the caller. If the ambiguity buffer overflows, the count
    of ambiguous pairs keeps growing past the buffer (caller must re-run with
    a bigger buffer).
    """
    m = edges.shape[0]
    certain = 0
    n_amb = 0
    cap = ambiguous_out.shape[0]
    for i in range(m):
        a = edges[i, 0]
        b = edges[i, 1]
        ax, ay = coords[a, 0], coords[a, 1]
        bx, by = coords[b, 0], coords[b, 1]
        lox = min(ax, bx)
        hix = max(ax, bx)
        loy = min(ay, by)
        hiy = max(ay, by)
        for j in range(i + 1, m):
            c = edges[j, 0]
            d = edges[j, 1]
            if a == c or a == d or b == c or b == d:
                continue
            cx, cy = coords[c, 0], coords[c, 1]
            dx, dy = coords[d, 0], coords[d, 1]
            if max(cx, dx) < lox or min(cx, dx) > hix:
                continue
            if max(cy, dy) < loy or min(cy, dy) > hiy:
                continue
            o1 = _orient_filtered(ax, ay, bx, by, cx, cy)
            o2 = _orient_filtered(ax, ay, bx, by, dx, dy)
            if o1 != 0 and o1 == o2:
                continue
            o3 = _orient_filtered(cx, cy, dx, dy, ax, ay)
            o4 = _orient_filtered(cx, cy, dx, dy, bx, by)
            if o3 != 0 and o3 == o4:
                continue
            if o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
                # strict straddle on both segments
                if o1 != o2 and o3 != o4:
                    certain += 1
                continue
            if n_amb < cap:
                ambiguous_out[n_amb, 0] = i
                ambiguous_out[n_amb, 1] = j
            n_amb += 1
    return certain, n_amb


@numba.njit(cache=True)
def rng_edges_brute(coords):
    """Relative neighborhood graph by the O(n^3) definition (strict lune)."""
    n = coords.shape[0]
    out = np.empty((n * (n - 1) // 2, 2), np.int64)
    cnt = 0
    for u in range(n):
        for v in range(u + 1, n):
            dx = coords[u, 0] - coords[v, 0]
            dy = coords[u, 1] - coords[v, 1]
            duv = dx * dx + dy * dy
            keep = True
            for w in range(n):
                if w == u or w == v:
                    continue
                dwx = coords[u, 0] - coords[w, 0]
                dwy = coords[u, 1] - coords[w, 1]
                duw = dwx * dwx + dwy * dwy
                if duw >= duv:
                    continue
                dwx = coords[v, 0] - coords[w, 0]
                dwy = coords[v, 1] - coords[w, 1]
                dvw = dwx * dwx + dwy * dwy
                if dvw < duv:
                    keep = False
                    break
            if keep:
                out[cnt, 0] = u
                out[cnt, 1] = v
                cnt += 1
    return out[:cnt]
