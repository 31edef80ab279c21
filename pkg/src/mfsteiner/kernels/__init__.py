"""Kernel backend selection.

Imports the compiled Cython kernels when the extension is present, otherwise
falls back to the numpy implementations.  Set ``MFSTEINER_PURE_PYTHON=1`` in
the environment to force the fallback (used by the benchmark and the
backend-equivalence tests).

All callers go through the wrappers below, which normalize dtypes; the two
backends share one interface, documented in ``_pykernels``.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("MFSTEINER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pykernels

BACKEND = _impl.BACKEND

__all__ = ["BACKEND", "dijkstra", "all_ecc", "prim_mst", "get_backend"]


def get_backend() -> str:
    """Name of the active backend: 'compiled' or 'python'."""
    return BACKEND


def _as_matrix(w) -> np.ndarray:
    return np.ascontiguousarray(w, dtype=np.float64)


def dijkstra(w, init, allowed, stop_after: int = -1, stop_vertex: int = -1):
    w = _as_matrix(w)
    init = np.ascontiguousarray(init, dtype=np.float64)
    allowed = np.ascontiguousarray(allowed, dtype=np.uint8)
    return _impl.dijkstra(w, init, allowed, stop_after, stop_vertex)


def all_ecc(w):
    return _impl.all_ecc(_as_matrix(w))


def prim_mst(w, idx) -> float:
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    return float(_impl.prim_mst(_as_matrix(w), idx))
