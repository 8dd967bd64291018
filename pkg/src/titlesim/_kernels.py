"""Hot numeric kernels.

Everything here is plain loop-over-ndarray code so that the exact same
source runs either JIT-compiled (numba) or interpreted (numpy fallback);
see ``_backend``. No fastmath: floating-point semantics, and therefore
results, are identical on both backends.
"""

import numpy as np

from ._backend import jit_kernel


@jit_kernel
def pairwise_euclidean(a, b):
    """Euclidean distance between every row of `a` (m,D) and of `b` (n,D)."""
    m = a.shape[0]
    n = b.shape[0]
    d = a.shape[1]
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            s = 0.0
            for k in range(d):
                diff = a[i, k] - b[j, k]
                s += diff * diff
            out[i, j] = np.sqrt(s)
    return out


@jit_kernel
def rows_euclidean(rows, q):
    """Euclidean distance from the vector `q` to every row of `rows`."""
    n = rows.shape[0]
    d = rows.shape[1]
    out = np.empty(n)
    for i in range(n):
        s = 0.0
        for k in range(d):
            diff = rows[i, k] - q[k]
            s += diff * diff
        out[i] = np.sqrt(s)
    return out


@jit_kernel
def weighted_centroid(points, weights):
    """Weighted sum of rows: sum_i weights[i] * points[i]."""
    m = points.shape[0]
    d = points.shape[1]
    out = np.zeros(d)
    for i in range(m):
        w = weights[i]
        for k in range(d):
            out[k] += w * points[i, k]
    return out


@jit_kernel
def solve_transport_flows(supplies, demands, costs):
    """Exact balanced-transportation solve by successive shortest paths.

    Dense bipartite min-cost flow with Johnson potentials: suppliers are
    nodes 0..m-1, consumers m..m+n-1, plus a super source and sink. Each
    augmentation saturates at least one source or sink arc, so there are
    at most m+n Dijkstra rounds. Ties in the node scan resolve to the
    lowest index, which makes the returned flow matrix deterministic.

    Returns (flows, objective).
    """
    m = supplies.shape[0]
    n = demands.shape[0]
    nv = m + n + 2
    src = m + n
    snk = m + n + 1

    flows = np.zeros((m, n))
    rem_s = supplies.copy()
    rem_d = demands.copy()
    pot = np.zeros(nv)
    dist = np.empty(nv)
    done = np.empty(nv, dtype=np.bool_)
    prev = np.empty(nv, dtype=np.int64)

    while True:
        for v in range(nv):
            dist[v] = np.inf
            done[v] = False
            prev[v] = -1
        dist[src] = 0.0

        for _ in range(nv):
            u = -1
            best = np.inf
            for v in range(nv):
                if not done[v] and dist[v] < best:
                    best = dist[v]
                    u = v
            if u < 0:
                break
            done[u] = True
            if u == snk:
                continue
            du = dist[u]
            if u == src:
                for i in range(m):
                    if rem_s[i] > 0.0 and not done[i]:
                        rc = pot[src] - pot[i]
                        if rc < 0.0:
                            rc = 0.0
                        nd = du + rc
                        if nd < dist[i]:
                            dist[i] = nd
                            prev[i] = src
            elif u < m:
                for j in range(n):
                    v = m + j
                    if not done[v]:
                        rc = costs[u, j] + pot[u] - pot[v]
                        if rc < 0.0:
                            rc = 0.0
                        nd = du + rc
                        if nd < dist[v]:
                            dist[v] = nd
                            prev[v] = u
            else:
                j = u - m
                for i in range(m):
                    if flows[i, j] > 0.0 and not done[i]:
                        rc = -costs[i, j] + pot[u] - pot[i]
                        if rc < 0.0:
                            rc = 0.0
                        nd = du + rc
                        if nd < dist[i]:
                            dist[i] = nd
                            prev[i] = u
                if rem_d[j] > 0.0 and not done[snk]:
                    rc = pot[u] - pot[snk]
                    if rc < 0.0:
                        rc = 0.0
                    nd = du + rc
                    if nd < dist[snk]:
                        dist[snk] = nd
                        prev[snk] = u

        if dist[snk] == np.inf:
            break

        for v in range(nv):
            if dist[v] < np.inf:
                pot[v] += dist[v]

        # Bottleneck along the shortest augmenting path.
        delta = np.inf
        v = snk
        while v != src:
            u = prev[v]
            if u == src:
                r = rem_s[v]
            elif v == snk:
                r = rem_d[u - m]
            elif u < m:
                r = np.inf
            else:
                r = flows[v, u - m]
            if r < delta:
                delta = r
            v = u
        if delta <= 0.0:
            break

        v = snk
        while v != src:
            u = prev[v]
            if u == src:
                rem_s[v] -= delta
            elif v == snk:
                rem_d[u - m] -= delta
            elif u < m:
                flows[u, v - m] += delta
            else:
                flows[v, u - m] -= delta
            v = u

    objective = 0.0
    for i in range(m):
        for j in range(n):
            objective += flows[i, j] * costs[i, j]
    return flows, objective
