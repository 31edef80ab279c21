"""Pure-numpy implementations of the hot kernels.

These mirror the compiled versions in ``_ckernels.pyx`` operation for
operation.  ``dijkstra`` and ``prim_mst`` perform the same floating-point
operations in the same order as the C code, so the two backends agree
bitwise.  ``all_ecc`` uses a vectorized Floyd-Warshall sweep instead of n
Dijkstra runs; distances agree with the compiled backend up to summation
order (last-ulp differences on reordered path sums).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def dijkstra(w, init, allowed, stop_after=-1, stop_vertex=-1):
    """Dense Dijkstra with arbitrary starting potentials.

    Parameters
    ----------
    w : (n, n) float64, symmetric, +inf diagonal.
    init : (n,) float64 starting potential per vertex (inf = not a source).
    allowed : (n,) uint8 mask; vertices outside are ignored entirely.
    stop_after : settle at most this many vertices (-1 = all allowed).
    stop_vertex : stop once this 0-based vertex settles (-1 = never).

    Returns
    -------
    dist : (n,) float64 -- final for settled vertices, tentative for the
        rest, +inf for unreached or disallowed.
    parent : (n,) int32 predecessor (-1 for sources / untouched).
    order : (n,) int32 settle order (only ``order[:settled]`` is valid).
    settled : int
    """
    n = w.shape[0]
    active = allowed.astype(bool).copy()
    dist = np.where(active, init, np.inf)
    work = dist.copy()
    parent = np.full(n, -1, np.int32)
    order = np.empty(n, np.int32)
    settled = 0
    while True:
        u = int(np.argmin(work))
        du = work[u]
        if not np.isfinite(du):
            break
        active[u] = False
        work[u] = np.inf
        order[settled] = u
        settled += 1
        if u == stop_vertex or settled == stop_after:
            break
        nd = du + w[u]
        improve = (nd < work) & active
        if improve.any():
            dist[improve] = nd[improve]
            work[improve] = nd[improve]
            parent[improve] = u
    return dist, parent, order, settled


def all_ecc(w):
    """Eccentricity of every vertex via Floyd-Warshall.

    Returns ``(ecc, far)`` where ``far[v]`` is the lowest-index vertex
    attaining ``ecc[v]``.
    """
    d = w.copy()
    np.fill_diagonal(d, 0.0)
    n = d.shape[0]
    for mid in range(n):
        np.minimum(d, d[:, mid][:, None] + d[mid][None, :], out=d)
    ecc = d.max(axis=1)
    far = d.argmax(axis=1).astype(np.int32)
    return ecc, far


def prim_mst(w, idx):
    """Weight of the MST of the complete subgraph induced by ``idx`` (0-based)."""
    m = idx.size
    if m <= 1:
        return 0.0
    sub = w[np.ix_(idx, idx)]
    intree = np.zeros(m, dtype=bool)
    intree[0] = True
    best = sub[0].copy()
    total = 0.0
    for _ in range(m - 1):
        best[intree] = np.inf
        j = int(np.argmin(best))
        total += float(best[j])
        intree[j] = True
        np.minimum(best, sub[j], out=best)
    return total
