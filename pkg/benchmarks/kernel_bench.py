#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

The three hot kernels dominate every large experiment: single-source
Dijkstra (ball growth, two-terminal Steiner), all-source eccentricities
(diameter / worst-case pairs), and Prim MST.  Usage:

    python benchmarks/kernel_bench.py --n 500 1000 --repeats 3
"""

import argparse
import time

import numpy as np

import mfsteiner as mf
from mfsteiner.kernels import _pykernels

try:
    from mfsteiner.kernels import _ckernels
except ImportError:
    _ckernels = None


def best_of(repeats, fn, *args):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def bench_backend(mod, w, repeats):
    n = w.shape[0]
    init = np.full(n, np.inf)
    init[0] = 0.0
    allowed = np.ones(n, dtype=np.uint8)
    idx = np.arange(n, dtype=np.int64)
    return {
        "dijkstra": best_of(repeats, mod.dijkstra, w, init, allowed, -1, -1),
        "all_ecc": best_of(repeats, mod.all_ecc, w),
        "prim_mst": best_of(repeats, mod.prim_mst, w, idx),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[300, 1000])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled kernels not built; showing fallback only\n")

    header = f"{'kernel':<10} {'n':>6} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in args.n:
        w = np.array(mf.gen_instance(n, mf.Seed(0, "bench", n)).full())
        py = bench_backend(_pykernels, w, args.repeats)
        cy = bench_backend(_ckernels, w, args.repeats) if _ckernels else {}
        for name, t_py in py.items():
            if cy:
                t_cy = cy[name]
                print(
                    f"{name:<10} {n:>6} {t_py:>11.4f}s {t_cy:>11.4f}s "
                    f"{t_py / t_cy:>8.1f}x"
                )
            else:
                print(f"{name:<10} {n:>6} {t_py:>11.4f}s {'-':>12} {'-':>9}")
    print(f"\nactive backend at import: {mf.get_backend()}")


if __name__ == "__main__":
    main()
