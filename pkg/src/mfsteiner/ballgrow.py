"""Staged ball growth: restricted infection balls, one-hop annuli, and the
path-union tree that upper-bounds the Steiner weight of v_1..v_k.

Stage 1 grows, for each root v_i in turn, a first-passage ball of m vertices
inside a domain from which all previously grown balls (and the later roots)
have been removed, so the balls are pairwise disjoint by construction.
Stage 2 extends every ball by m more vertices using single edge hops into the
common pool of still-uninfected vertices.  If the k annuli share a vertex w,
the union of the root-to-w paths is a tree connecting the roots, and its
weight is at most the certificate sum of stage durations.

On a fixed instance the growth is deterministic: stage 1 is shortest-path
growth restricted to the domain, stage 2 a one-hop minimum over the ball.
The exponential stage-time laws are distributional facts over random
instances; ``simulate_stage_times`` samples them directly and ``mgf_exact``
evaluates the product form of the stage-time moment generating function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InfeasibleSizeError
from .instance import Instance

__all__ = [
    "Ball",
    "Annulus",
    "BallGrowthTrace",
    "BallGrowthOutcome",
    "c_kn",
    "grow_ball",
    "grow_annulus",
    "ball_growth_tree",
    "simulate_stage_times",
    "stage_rates",
    "mgf_exact",
]


def c_kn(n: int, k: int) -> float:
    """Ball-size threshold n^((k-1)/k) * ((k+1) ln n)^(1/k), natural log."""
    if n < 2:
        raise ValueError("n must be at least 2 (ln n must be positive)")
    if k < 1:
        raise ValueError("k must be at least 1")
    return n ** ((k - 1) / k) * ((k + 1) * math.log(n)) ** (1.0 / k)


@dataclass(frozen=True)
class Ball:
    """Stage-1 ball: vertices in arrival order (root first, arrival 0).

    ``parents[i]`` is the vertex the infection arrived from (0 for the root);
    ``duration`` is the arrival time of the last (m-th) vertex.
    """

    root: int
    vertices: np.ndarray
    arrivals: np.ndarray
    parents: np.ndarray
    duration: float

    def arrival_of(self, v: int) -> float:
        pos = np.nonzero(self.vertices == v)[0]
        if pos.size == 0:
            raise KeyError(f"vertex {v} not in ball")
        return float(self.arrivals[pos[0]])


@dataclass(frozen=True)
class Annulus:
    """Stage-2 annulus: m vertices attached to the ball by one edge each."""

    vertices: np.ndarray
    arrivals: np.ndarray
    parents: np.ndarray
    duration: float


@dataclass(frozen=True)
class BallGrowthTrace:
    m: int
    balls: tuple[Ball, ...]
    annuli: tuple[Annulus, ...]

    @property
    def z1(self) -> tuple[float, ...]:
        return tuple(b.duration for b in self.balls)

    @property
    def z2(self) -> tuple[float, ...]:
        return tuple(a.duration for a in self.annuli)


@dataclass(frozen=True)
class BallGrowthOutcome:
    """Result of one staged construction.

    ``status`` is 'success' or 'failed-intersection'.  On success the edges
    form a tree connecting v_1..v_k whose weight lies between the exact
    Steiner weight and ``certificate`` = sum of stage durations.
    """

    status: str
    meeting_vertex: int | None
    edges: tuple[tuple[int, int], ...]
    weight: float | None
    certificate: float
    trace: BallGrowthTrace


def grow_ball(inst: Instance, root: int, domain, m: int) -> Ball:
    """First-passage ball of ``m`` vertices around ``root`` inside ``domain``.

    Arrival time of v is its shortest-path distance from the root within the
    induced subgraph; the duration is the m-th smallest arrival.  Ties break
    by vertex index.
    """
    domain_idx = np.asarray(sorted({int(v) - 1 for v in domain}), dtype=np.int64)
    if not (1 <= root <= inst.n) or (root - 1) not in domain_idx:
        raise ValueError("root must belong to the domain")
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > domain_idx.size:
        raise InfeasibleSizeError(
            f"cannot grow a ball of {m} vertices in a domain of {domain_idx.size}"
        )
    mask = np.zeros(inst.n, dtype=np.uint8)
    mask[domain_idx] = 1
    init = np.full(inst.n, np.inf)
    init[root - 1] = 0.0
    dist, parent, order, settled = kernels.dijkstra(
        inst.full(), init, mask, stop_after=m
    )
    assert settled == m
    members = order[:m]
    return Ball(
        root=int(root),
        vertices=(members + 1).astype(np.int32),
        arrivals=dist[members].copy(),
        parents=(parent[members] + 1).astype(np.int32),
        duration=float(dist[members[-1]]),
    )


def grow_annulus(inst: Instance, ball: Ball, eligible, m: int) -> Annulus:
    """One-hop growth: the m eligible vertices closest to the ball.

    The arrival of v is min over ball members u of arrival(u) + T_uv, and its
    parent is the minimizing u.  The duration is measured from the end of
    stage 1.  Every arrival must be >= the ball duration; this holds by
    construction when ``eligible`` lies inside the ball's growth domain.
    """
    elig_idx = np.asarray(sorted({int(v) - 1 for v in eligible}), dtype=np.int64)
    ball_idx = ball.vertices.astype(np.int64) - 1
    if np.intersect1d(elig_idx, ball_idx).size:
        raise ValueError("eligible set must be disjoint from the ball")
    if m < 1:
        raise ValueError("m must be at least 1")
    if m > elig_idx.size:
        raise InfeasibleSizeError(
            f"cannot grow an annulus of {m} vertices from {elig_idx.size} eligible"
        )
    w = inst.full()
    hop = w[np.ix_(ball_idx, elig_idx)] + ball.arrivals[:, None]
    pos = np.argmin(hop, axis=0)
    arrivals = hop[pos, np.arange(elig_idx.size)]
    take = np.lexsort((elig_idx, arrivals))[:m]
    arr = arrivals[take]
    if arr.min() < ball.duration * (1.0 - 1e-12):
        raise ValueError(
            "annulus arrival earlier than the stage-1 duration; the eligible "
            "set must lie inside the ball's growth domain"
        )
    return Annulus(
        vertices=(elig_idx[take] + 1).astype(np.int32),
        arrivals=arr.copy(),
        parents=ball.vertices[pos[take]].astype(np.int32),
        duration=float(arr[-1] - ball.duration),
    )


def _kruskal(inst: Instance, edges) -> tuple[tuple[tuple[int, int], ...], float]:
    """Spanning tree of the union graph; drops the heaviest edge of any cycle.

    The union of the root-to-w paths is almost surely already a tree, in
    which case every edge is kept.
    """
    ranked = sorted(edges, key=lambda e: (inst.weight(*e), e))
    root: dict[int, int] = {}

    def find(x: int) -> int:
        while root.setdefault(x, x) != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    kept = []
    total = 0.0
    for u, v in ranked:
        ru, rv = find(u), find(v)
        if ru != rv:
            root[ru] = rv
            kept.append((u, v))
            total += inst.weight(u, v)
    return tuple(sorted(kept)), total


def ball_growth_tree(
    inst: Instance,
    k: int,
    m_override: int | None = None,
    meeting_rule: str = "lowest_index",
) -> BallGrowthOutcome:
    """Run the staged construction for terminals v_1..v_k.

    ``m`` defaults to ceil(c_kn(n, k)).  Requires 2*k*m <= n so that the k
    balls and the annuli all fit.  ``meeting_rule`` picks the meeting vertex
    among the annulus intersection: 'lowest_index' (default) or 'min_total'
    (minimizing the summed path lengths).
    """
    n = inst.n
    if k < 1 or k > n:
        raise ValueError(f"k must lie in 1..{n}")
    if meeting_rule not in ("lowest_index", "min_total"):
        raise ValueError(f"unknown meeting rule {meeting_rule!r}")
    m = int(m_override) if m_override is not None else math.ceil(c_kn(n, k))
    if k == 1:
        trace = BallGrowthTrace(m=m, balls=(), annuli=())
        return BallGrowthOutcome("success", None, (), 0.0, 0.0, trace)
    if 2 * k * m > n:
        raise InfeasibleSizeError(
            f"2*k*m = {2 * k * m} exceeds n = {n}; balls plus annuli cannot fit"
        )

    avail = np.ones(n + 1, dtype=bool)
    avail[0] = False
    avail[2 : k + 1] = False  # later roots are withheld until their own stage
    balls = []
    for i in range(1, k + 1):
        avail[i] = True
        domain = np.nonzero(avail)[0]
        ball = grow_ball(inst, i, domain, m)
        avail[ball.vertices] = False
        balls.append(ball)

    eligible = np.nonzero(avail)[0]
    annuli = [grow_annulus(inst, ball, eligible, m) for ball in balls]
    trace = BallGrowthTrace(m=m, balls=tuple(balls), annuli=tuple(annuli))
    certificate = float(sum(trace.z1) + sum(trace.z2))

    common = set(annuli[0].vertices.tolist())
    for ann in annuli[1:]:
        common &= set(ann.vertices.tolist())
    if not common:
        return BallGrowthOutcome("failed-intersection", None, (), None, certificate, trace)

    def total_length(wv: int) -> float:
        return sum(
            float(ann.arrivals[np.nonzero(ann.vertices == wv)[0][0]]) for ann in annuli
        )

    if meeting_rule == "lowest_index":
        w_meet = min(common)
    else:
        w_meet = min(common, key=lambda wv: (total_length(wv), wv))

    edges: set[tuple[int, int]] = set()
    for ball, ann in zip(balls, annuli):
        pos = int(np.nonzero(ann.vertices == w_meet)[0][0])
        hop_parent = int(ann.parents[pos])
        edges.add((min(hop_parent, w_meet), max(hop_parent, w_meet)))
        # stage-1 chain from the hop parent back to the root
        v = hop_parent
        bpos = int(np.nonzero(ball.vertices == v)[0][0])
        while ball.parents[bpos] != 0:
            u = int(ball.parents[bpos])
            edges.add((min(u, v), max(u, v)))
            v = u
            bpos = int(np.nonzero(ball.vertices == v)[0][0])

    tree_edges, weight = _kruskal(inst, edges)
    return BallGrowthOutcome("success", int(w_meet), tree_edges, weight, certificate, trace)


def stage_rates(n: int, k: int, c_override: int | None = None):
    """Exponential rates of the stage increments for root v_1.

    Stage 1 has c-1 increments at rates i*(n'-i); stage 2 has c increments at
    rates (n'-k*c-i+1)*c, where n' = n-k+1 and c = ceil(c_kn(n, k)).
    """
    n_prime = n - k + 1
    c = int(c_override) if c_override is not None else math.ceil(c_kn(n, k))
    i1 = np.arange(1, c, dtype=np.float64)
    rates1 = i1 * (n_prime - i1)
    i2 = np.arange(1, c + 1, dtype=np.float64)
    rates2 = (n_prime - k * c - i2 + 1) * c
    if (rates1.size and rates1.min() <= 0) or (rates2.size and rates2.min() <= 0):
        raise InfeasibleSizeError(
            f"nonpositive stage rate at n={n}, k={k}, c={c}; the construction "
            "does not fit"
        )
    return rates1, rates2


def simulate_stage_times(
    n: int, k: int, rng: np.random.Generator, c_override: int | None = None
) -> tuple[float, float]:
    """Sample (Z^1, Z^2) from the exact stage-time laws, no graph needed."""
    rates1, rates2 = stage_rates(n, k, c_override)
    z1 = float(np.sum(-np.log1p(-rng.random(rates1.size)) / rates1)) if rates1.size else 0.0
    z2 = float(np.sum(-np.log1p(-rng.random(rates2.size)) / rates2)) if rates2.size else 0.0
    return z1, z2


def mgf_exact(n: int, k: int, t: float, c_override: int | None = None) -> float:
    """E[exp(n*t*Z_1)] under the independent-exponential stage model.

    Z_1 = Z^1 + Z^2 is the total stage time; the MGF is the product of
    (1 - n*t/rate)^-1 over all stage rates.  Diverges (raises) unless
    n*t < min rate.
    """
    rates1, rates2 = stage_rates(n, k, c_override)
    rates = np.concatenate([rates1, rates2])
    x = n * t
    if rates.size and x >= rates.min():
        raise ValueError(
            f"MGF diverges: n*t = {x} is not below the minimum stage rate "
            f"{rates.min()}"
        )
    return float(np.exp(-np.sum(np.log1p(-x / rates)))) if rates.size else 1.0
