"""Worst-case Steiner weights: k fixed terminals plus l adversarial ones.

``w_max(inst, k, l)`` maximizes the Steiner weight over every terminal set
consisting of the fixed vertices v_1..v_k plus l free vertices.  The headline
cases have cheap dedicated paths:

* l = 0: one exact Steiner call;
* (k, l) = (1, 1): eccentricity of v_1 (one shortest-path run);
* (k, l) = (0, 2): graph diameter (all-source eccentricities);
* l = 1, k >= 1: one Dreyfus-Wagner run scores terminals + {v} for every v.

Everything else enumerates the C(n-k, l) free subsets against an evaluation
budget.  Witnesses are the lexicographically smallest maximizers.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import CapabilityError
from .instance import Instance
from .steiner import KMAX_DEFAULT, shortest_paths, steiner_exact, steiner_weights_plus_one

__all__ = ["WMaxResult", "w_max", "eccentricity", "diameter", "DEFAULT_BUDGET"]

DEFAULT_BUDGET = 10**7


class WMaxResult(NamedTuple):
    weight: float
    witness: tuple[int, ...]


def eccentricity(inst: Instance, v: int) -> float:
    """max_u d(v, u); equals w_max(1, 1) when v = v_1."""
    dm = shortest_paths(inst, v)
    return float(np.max(dm.dist))


def diameter(inst: Instance) -> float:
    """Maximum shortest-path distance over all vertex pairs (= w_max(0, 2))."""
    if inst.n < 2:
        raise ValueError("diameter needs n >= 2")
    ecc, _ = kernels.all_ecc(inst.full())
    return float(np.max(ecc))


def _diameter_witness(inst: Instance) -> tuple[float, tuple[int, int]]:
    ecc, far = kernels.all_ecc(inst.full())
    value = float(np.max(ecc))
    i = int(np.argmax(ecc))
    j = int(far[i])
    return value, (i + 1, j + 1)


def w_max(
    inst: Instance,
    k: int,
    l: int,
    k_max: int = KMAX_DEFAULT,
    budget: int = DEFAULT_BUDGET,
) -> WMaxResult:
    """Exact max of w(S) over S containing v_1..v_k with |S| = k + l.

    Returns the weight and one maximizing choice of the l free vertices
    (lowest lexicographic among maximizers; empty when l = 0).
    """
    if k < 0 or l < 0 or k + l < 1:
        raise ValueError("need k >= 0, l >= 0, k + l >= 1")
    if k + l > inst.n:
        raise ValueError(f"k + l = {k + l} exceeds n = {inst.n}")
    if k + l > k_max:
        raise CapabilityError(f"k + l = {k + l} exceeds the Steiner cap k_max={k_max}")

    if k + l == 1:
        return WMaxResult(0.0, () if l == 0 else (1,))
    if l == 0:
        return WMaxResult(steiner_exact(inst, range(1, k + 1), k_max).weight, ())
    if (k, l) == (1, 1):
        dm = shortest_paths(inst, 1)
        u = int(np.argmax(dm.dist))
        return WMaxResult(float(dm.dist[u]), (u + 1,))
    if (k, l) == (0, 2):
        value, pair = _diameter_witness(inst)
        return WMaxResult(value, pair)
    if l == 1:
        row = steiner_weights_plus_one(inst, range(1, k + 1))
        row[:k] = -np.inf  # free vertex must avoid the fixed ones
        u = int(np.argmax(row))
        return WMaxResult(float(row[u]), (u + 1,))

    total = comb(inst.n - k, l)
    if total > budget:
        raise CapabilityError(
            f"enumerating C({inst.n - k}, {l}) = {total} subsets exceeds the "
            f"budget of {budget} Steiner evaluations"
        )
    fixed = tuple(range(1, k + 1))
    best = -np.inf
    best_subset: tuple[int, ...] = ()
    evaluated = 0
    for free in combinations(range(k + 1, inst.n + 1), l):
        weight = steiner_exact(inst, fixed + free, k_max).weight
        evaluated += 1
        if weight > best:
            best = weight
            best_subset = free
    assert evaluated == total
    return WMaxResult(float(best), best_subset)
