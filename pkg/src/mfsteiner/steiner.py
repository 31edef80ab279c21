"""Shortest paths, exact minimum Steiner trees, and a brute-force oracle.

``steiner_exact`` runs the Dreyfus-Wagner dynamic program over subsets of the
terminal set: for each subset ``X`` it holds an n-vector ``dp[X][v]`` = weight
of the cheapest tree connecting ``X + {v}``.  Subsets merge at a common
vertex, then a Dijkstra sweep with the merged values as starting potentials
propagates along graph edges (O(3^s n + 2^s n^2) for s terminals).  Tree
edges are recovered by backtracking the recorded merge/relax choices.

``steiner_bruteforce`` is the independent oracle: minimize the MST weight of
the induced subgraph over every vertex superset of the terminals.  It shares
nothing with the DP except the Prim kernel.

All vertices are 1-based, matching instance labels v_1..v_n.  Ties (measure
zero for continuous weights) are broken deterministically: lowest vertex
index in every argmin, lowest submask in every merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import CapabilityError
from .instance import Instance

__all__ = [
    "DistanceMap",
    "SteinerResult",
    "shortest_paths",
    "steiner_exact",
    "steiner_bruteforce",
    "mst",
    "KMAX_DEFAULT",
    "BRUTEFORCE_MAX_N",
]

KMAX_DEFAULT = 8
BRUTEFORCE_MAX_N = 12


@dataclass(frozen=True)
class DistanceMap:
    """Single-source shortest-path distances restricted to ``allowed``.

    ``dist[v-1]`` is the distance to vertex v, ``+inf`` for vertices outside
    ``allowed``.  ``parent[v-1]`` is the predecessor vertex label (0 = none).
    """

    source: int
    allowed: frozenset[int]
    dist: np.ndarray
    parent: np.ndarray

    def distance(self, v: int) -> float:
        return float(self.dist[v - 1])

    def path(self, v: int) -> list[int]:
        """Vertices from source to v along parent pointers."""
        if not np.isfinite(self.dist[v - 1]):
            raise ValueError(f"vertex {v} is outside the allowed set")
        out = [v]
        while out[-1] != self.source:
            out.append(int(self.parent[out[-1] - 1]))
        out.reverse()
        return out


@dataclass(frozen=True)
class SteinerResult:
    """Optimal tree for a terminal set: weight and sorted edge list."""

    terminals: tuple[int, ...]
    weight: float
    edges: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def _check_vertices(inst: Instance, vertices, what: str) -> list[int]:
    out = sorted({int(v) for v in vertices})
    if not out:
        raise ValueError(f"{what} must be nonempty")
    if out[0] < 1 or out[-1] > inst.n:
        raise ValueError(f"{what} must lie in 1..{inst.n}")
    return out


def shortest_paths(inst: Instance, source: int, allowed=None) -> DistanceMap:
    """Exact distances from ``source`` in the subgraph induced by ``allowed``."""
    if allowed is None:
        allowed_list = list(range(1, inst.n + 1))
    else:
        allowed_list = _check_vertices(inst, allowed, "allowed")
    mask = np.zeros(inst.n, dtype=np.uint8)
    mask[[v - 1 for v in allowed_list]] = 1
    if not (1 <= source <= inst.n) or not mask[source - 1]:
        raise ValueError("source must be a member of the allowed set")
    init = np.full(inst.n, np.inf)
    init[source - 1] = 0.0
    dist, parent, _, _ = kernels.dijkstra(inst.full(), init, mask)
    return DistanceMap(
        source=int(source),
        allowed=frozenset(allowed_list),
        dist=dist,
        parent=(parent + 1).astype(np.int32),
    )


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _chain_edges(parent: np.ndarray, v: int, edges: set) -> int:
    """Walk 0-based parent pointers from v to a root; returns the root."""
    while parent[v] >= 0:
        u = int(parent[v])
        edges.add(_norm_edge(u + 1, v + 1))
        v = u
    return v


class _DWTables:
    """Dreyfus-Wagner tables over subsets of ``base`` (0-based vertices)."""

    def __init__(self, inst: Instance, base: list[int]):
        n = inst.n
        w = inst.full()
        r = len(base)
        nmask = 1 << r
        allowed = np.ones(n, dtype=np.uint8)
        self.base = base
        self.dp = np.empty((nmask, n))
        self.parent = np.empty((nmask, n), dtype=np.int32)
        self.choice = np.zeros((nmask, n), dtype=np.int32)
        self.dp[0] = np.inf
        for i, t in enumerate(base):
            init = np.full(n, np.inf)
            init[t] = 0.0
            m = 1 << i
            self.dp[m], self.parent[m], _, _ = kernels.dijkstra(w, init, allowed)
        for mask in range(3, nmask):
            if mask & (mask - 1) == 0:
                continue
            merged = np.full(n, np.inf)
            ch = np.zeros(n, dtype=np.int32)
            subs = []
            s = (mask - 1) & mask
            while s:
                subs.append(s)
                s = (s - 1) & mask
            for s in sorted(subs):
                rest = mask ^ s
                if s > rest:
                    continue
                cand = self.dp[s] + self.dp[rest]
                upd = cand < merged
                merged[upd] = cand[upd]
                ch[upd] = s
            self.dp[mask], self.parent[mask], _, _ = kernels.dijkstra(w, merged, allowed)
            self.choice[mask] = ch

    def reconstruct(self, mask: int, v: int, edges: set) -> None:
        root = _chain_edges(self.parent[mask], v, edges)
        if mask & (mask - 1) == 0:
            return
        sub = int(self.choice[mask][root])
        self.reconstruct(sub, root, edges)
        self.reconstruct(mask ^ sub, root, edges)


def steiner_exact(inst: Instance, terminals, k_max: int = KMAX_DEFAULT) -> SteinerResult:
    """Minimum-weight tree containing ``terminals`` (globally optimal).

    Raises :class:`CapabilityError` when ``len(terminals) > k_max``; the DP
    is exponential in the number of terminals.
    """
    terms = _check_vertices(inst, terminals, "terminals")
    if len(terms) > k_max:
        raise CapabilityError(
            f"{len(terms)} terminals exceed k_max={k_max} (exponential DP)"
        )
    if len(terms) == 1:
        return SteinerResult(tuple(terms), 0.0, ())

    edges: set[tuple[int, int]] = set()
    if len(terms) == 2:
        s, t = terms
        init = np.full(inst.n, np.inf)
        init[s - 1] = 0.0
        mask = np.ones(inst.n, dtype=np.uint8)
        dist, parent, _, _ = kernels.dijkstra(
            inst.full(), init, mask, stop_vertex=t - 1
        )
        weight = float(dist[t - 1])
        _chain_edges(parent, t - 1, edges)
    else:
        base = [t - 1 for t in terms[:-1]]
        anchor = terms[-1] - 1
        tables = _DWTables(inst, base)
        full = (1 << len(base)) - 1
        weight = float(tables.dp[full][anchor])
        tables.reconstruct(full, anchor, edges)

    edge_list = tuple(sorted(edges))
    total = sum(inst.weight(i, j) for i, j in edge_list)
    if abs(total - weight) > 1e-9 * max(1.0, abs(weight)):
        raise AssertionError(
            f"reconstructed tree weight {total} disagrees with DP value {weight}"
        )
    return SteinerResult(tuple(terms), weight, edge_list)


def steiner_weights_plus_one(inst: Instance, terminals) -> np.ndarray:
    """Vector of w(terminals + {v}) for every vertex v, one DP run.

    ``out[v-1]`` equals the exact Steiner weight of ``terminals | {v}``
    (which is w(terminals) itself for v already terminal).
    """
    terms = _check_vertices(inst, terminals, "terminals")
    tables = _DWTables(inst, [t - 1 for t in terms])
    return tables.dp[(1 << len(terms)) - 1].copy()


def mst(inst: Instance, vertices=None) -> float:
    """Exact MST weight of the complete subgraph induced by ``vertices``."""
    if vertices is None:
        idx = np.arange(inst.n, dtype=np.int64)
    else:
        idx = np.array(
            [v - 1 for v in _check_vertices(inst, vertices, "vertices")],
            dtype=np.int64,
        )
    return kernels.prim_mst(inst.full(), idx)


def steiner_bruteforce(inst: Instance, terminals) -> float:
    """Oracle: min over X with S <= X <= V of the induced MST weight.

    Enumerates all 2^(n-|S|) supersets, so only n <= BRUTEFORCE_MAX_N is
    allowed.
    """
    if inst.n > BRUTEFORCE_MAX_N:
        raise CapabilityError(
            f"brute force enumerates all vertex supersets; n={inst.n} exceeds "
            f"{BRUTEFORCE_MAX_N}"
        )
    terms = _check_vertices(inst, terminals, "terminals")
    w = inst.full()
    fixed = np.array([t - 1 for t in terms], dtype=np.int64)
    free = np.array([v for v in range(inst.n) if v + 1 not in terms], dtype=np.int64)
    best = np.inf
    for bits in range(1 << free.size):
        chosen = free[[b for b in range(free.size) if bits >> b & 1]]
        idx = np.sort(np.concatenate([fixed, chosen]))
        best = min(best, kernels.prim_mst(w, idx))
    return float(best)
