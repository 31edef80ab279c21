"""Independent oracles used by several test modules.

The all-subset Steiner oracle never touches the dynamic program: it computes
the MST of every induced subgraph and takes minima over supersets, which is
the definition the brute-force path uses.
"""

import numpy as np

from mfsteiner import kernels


def all_subset_steiner(inst):
    """w(S) for every nonempty S, indexed by bitmask over vertices 1..n."""
    n = inst.n
    w = inst.full()
    size = 1 << n
    best = np.empty(size)
    best[0] = np.inf
    for mask in range(1, size):
        idx = np.array([b for b in range(n) if mask >> b & 1], dtype=np.int64)
        best[mask] = kernels.prim_mst(w, idx)
    for b in range(n):
        bit = 1 << b
        without = np.array([m for m in range(size) if not m & bit])
        best[without] = np.minimum(best[without], best[without | bit])
    return best


def oracle_w_max(w_all, n, k, l):
    """max of w(S) over S containing vertices 1..k with |S| = k + l."""
    fixed = (1 << k) - 1
    best = -np.inf
    for mask in range(1, 1 << n):
        if mask & fixed == fixed and bin(mask).count("1") == k + l:
            best = max(best, w_all[mask])
    return best
