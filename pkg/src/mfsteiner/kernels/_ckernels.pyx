# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: dense Dijkstra, all-source eccentricities, Prim MST.

Semantics match ``_pykernels`` exactly; see that module for the interface
documentation.  ``dijkstra`` and ``prim_mst`` replay the same floating-point
operation sequence as the numpy fallback and agree with it bitwise.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

from libc.math cimport INFINITY

BACKEND = "compiled"


def dijkstra(const double[:, ::1] w, const double[::1] init, const cnp.uint8_t[::1] allowed,
             Py_ssize_t stop_after=-1, Py_ssize_t stop_vertex=-1):
    cdef Py_ssize_t n = w.shape[0]
    dist_arr = np.empty(n, dtype=np.float64)
    parent_arr = np.full(n, -1, dtype=np.int32)
    order_arr = np.empty(n, dtype=np.int32)
    active_arr = np.empty(n, dtype=np.uint8)
    cdef double[::1] dist = dist_arr
    cdef cnp.int32_t[::1] parent = parent_arr
    cdef cnp.int32_t[::1] order = order_arr
    cdef cnp.uint8_t[::1] active = active_arr
    cdef Py_ssize_t settled = 0, u, v
    cdef double du, nd, best

    for v in range(n):
        active[v] = allowed[v]
        dist[v] = init[v] if allowed[v] else INFINITY

    while True:
        u = -1
        best = INFINITY
        for v in range(n):
            if active[v] and dist[v] < best:
                best = dist[v]
                u = v
        if u < 0:
            break
        active[u] = 0
        order[settled] = u
        settled += 1
        if u == stop_vertex or settled == stop_after:
            break
        du = dist[u]
        for v in range(n):
            if active[v]:
                nd = du + w[u, v]
                if nd < dist[v]:
                    dist[v] = nd
                    parent[v] = u
    return dist_arr, parent_arr, order_arr, settled


def all_ecc(const double[:, ::1] w):
    # Unsettled vertices are kept compacted in idx[:m] (swap-remove on
    # settle), which halves the scan work versus a settled-flag test.  The
    # final distances do not depend on the settle order among ties, and far
    # is recomputed from them, so this stays equivalent to the fallback up
    # to path-sum rounding.
    cdef Py_ssize_t n = w.shape[0]
    ecc_arr = np.empty(n, dtype=np.float64)
    far_arr = np.empty(n, dtype=np.int32)
    dist_arr = np.empty(n, dtype=np.float64)
    idx_arr = np.empty(n, dtype=np.intp)
    cdef double[::1] ecc = ecc_arr
    cdef cnp.int32_t[::1] far = far_arr
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t[::1] idx = idx_arr
    cdef Py_ssize_t s, u, v, t, bi, m, arg
    cdef double du, nd, best, maxd

    for s in range(n):
        for v in range(n):
            idx[v] = v
            dist[v] = INFINITY
        dist[s] = 0.0
        m = n
        while m > 0:
            best = INFINITY
            bi = -1
            for t in range(m):
                if dist[idx[t]] < best:
                    best = dist[idx[t]]
                    bi = t
            if bi < 0:
                break
            u = idx[bi]
            idx[bi] = idx[m - 1]
            m -= 1
            du = dist[u]
            for t in range(m):
                v = idx[t]
                nd = du + w[u, v]
                if nd < dist[v]:
                    dist[v] = nd
        maxd = -1.0
        arg = 0
        for v in range(n):
            if v != s and dist[v] > maxd:
                maxd = dist[v]
                arg = v
        ecc[s] = maxd
        far[s] = <cnp.int32_t> arg
    return ecc_arr, far_arr


def prim_mst(const double[:, ::1] w, const cnp.int64_t[::1] idx):
    cdef Py_ssize_t m = idx.shape[0]
    if m <= 1:
        return 0.0
    best_arr = np.empty(m, dtype=np.float64)
    intree_arr = np.zeros(m, dtype=np.uint8)
    cdef double[::1] best = best_arr
    cdef cnp.uint8_t[::1] intree = intree_arr
    cdef Py_ssize_t t, j, step
    cdef double total = 0.0, bv, val

    for t in range(m):
        best[t] = w[idx[0], idx[t]]
    intree[0] = 1
    for step in range(m - 1):
        j = -1
        bv = INFINITY
        for t in range(m):
            if not intree[t] and best[t] < bv:
                bv = best[t]
                j = t
        total += best[j]
        intree[j] = 1
        for t in range(m):
            if not intree[t]:
                val = w[idx[j], idx[t]]
                if val < best[t]:
                    best[t] = val
    return total
