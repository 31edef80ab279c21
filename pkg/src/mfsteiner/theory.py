"""Finite-n checks of the subset-intersection bound and the lower-bound
coupling machinery.

The lower-bound construction partitions the vertices into k blocks A_1..A_k
of size ceil(n^(1-eps)) and a remainder B.  For each A-vertex, U_i is its
one-hop distance to B, an exponential with rate |B|.  The coupled weights T'
add b to the l_j rows, squeeze the earlier rows through the f transform, and
leave everything else alone; their law equals the law of T conditioned on
"within each block, l_j is the first vertex whose U exceeds b".

Exponential conventions differ by source, so every interface here states one:
``mu`` parameters are MEANS (the f-lemma's scale), and the U_i law is rate
|B|, i.e. mean 1/|B|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError
from .instance import Instance
from .stats import binomial_se, ks_two_sample
from .steiner import steiner_exact

__all__ = [
    "Partition",
    "CouplingSpec",
    "lemma2_bound",
    "subset_intersection_empty_freq",
    "f_transform",
    "check_f_conditional_law",
    "check_f_tail_bound",
    "tail_hypothesis_threshold",
    "u_minima",
    "apply_coupling",
    "coupling_law_check",
    "lower_bound_conditions",
]


# --------------------------------------------------------------------------
# subset intersection bound


def lemma2_bound(n: int, m: int, k: int) -> float:
    """exp(-m^k n^(1-k)): upper bound on P(k uniform m-subsets of [n] miss)."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    if k < 1:
        raise ValueError("k must be at least 1")
    return math.exp(-float(m) ** k * float(n) ** (1 - k))


def subset_intersection_empty_freq(
    n: int, m: int, k: int, trials: int, rng: np.random.Generator
) -> float:
    """Fraction of trials where k uniform m-subsets of [n] have empty
    intersection.

    Subsets are drawn by partial Fisher-Yates, vectorized across trials: m
    swap rounds, each swapping position j with a uniform position in [j, n).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    hits = np.ones((trials, n), dtype=bool)
    rows = np.arange(trials)
    for _ in range(k):
        perm = np.tile(np.arange(n), (trials, 1))
        for j in range(m):
            pick = rng.integers(j, n, size=trials)
            chosen = perm[rows, pick]
            perm[rows, pick] = perm[:, j]
            perm[:, j] = chosen
        member = np.zeros((trials, n), dtype=bool)
        member[rows[:, None], perm[:, :m]] = True
        hits &= member
    empty = ~hits.any(axis=1)
    return float(np.mean(empty))


# --------------------------------------------------------------------------
# the f transform


def f_transform(x, mu: float, b: float):
    """-mu * ln(e^(-b/mu) + (1 - e^(-b/mu)) e^(-x/mu)).

    Strictly increasing, maps [0, inf) into [0, b); f(X) for X ~ Exp(mean mu)
    has the law of X conditioned on X <= b.  Homogeneous: f(x; mu, b) =
    mu * f(x/mu; 1, b/mu).
    """
    if mu <= 0 or b < 0:
        raise ValueError("need mu > 0 and b >= 0")
    x = np.asarray(x, dtype=np.float64)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    base = math.exp(-b / mu)
    out = -mu * np.log(base + (1.0 - base) * np.exp(-x / mu)) + 0.0
    if b > 0.0:
        # keep the range open at b: for x/mu beyond ~745 the inner sum
        # underflows onto e^(-b/mu) and the log would round to b exactly
        out = np.minimum(out, np.nextafter(b, 0.0))
    return float(out) if out.ndim == 0 else out


def _exp_mean(mu: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Exponential draws with MEAN mu via the inverse CDF."""
    return -mu * np.log1p(-rng.random(size))


def check_f_conditional_law(
    mu: float, b: float, samples: int, rng: np.random.Generator
) -> float:
    """Sup distance between the empirical CDF of f(X) and the conditional CDF
    of X given X <= b, for X ~ Exp(mean mu).  Equal in law, so the statistic
    should sit below the DKW radius."""
    if samples < 1000:
        raise ValueError("need at least 10^3 samples")
    x = _exp_mean(mu, samples, rng)
    y = np.sort(f_transform(x, mu, b))
    denom = -math.expm1(-b / mu)
    cdf = np.clip(-np.expm1(-y / mu) / denom, 0.0, 1.0)
    grid = np.arange(1, samples + 1) / samples
    return float(max(np.max(grid - cdf), np.max(cdf - (grid - 1.0 / samples))))


def tail_hypothesis_threshold(alpha: float) -> float:
    """Minimum b/mu for the tail bound: alpha (1 - ln alpha) / (1 - alpha)."""
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    if alpha == 0.0:
        return 0.0
    return alpha * (1.0 - math.log(alpha)) / (1.0 - alpha)


def check_f_tail_bound(
    mu: float, b: float, alpha: float, samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Empirical P(f(X) <= alpha X) against the analytic bound
    e^(1 - b/(alpha mu)).

    Requires the hypothesis b/mu >= alpha(1 - ln alpha)/(1 - alpha); raises
    naming the threshold otherwise.  Draws with X == 0 are excluded (equality
    is trivial there).  Asserts freq <= bound + 3 binomial standard errors.
    """
    if samples < 10**4:
        raise ValueError("need at least 10^4 samples")
    threshold = tail_hypothesis_threshold(alpha)
    if b / mu < threshold:
        raise ValueError(
            f"tail-bound hypothesis violated: b/mu = {b / mu:.6g} is below "
            f"alpha(1 - ln alpha)/(1 - alpha) = {threshold:.6g}"
        )
    x = _exp_mean(mu, samples, rng)
    x = x[x > 0.0]
    freq = float(np.mean(f_transform(x, mu, b) <= alpha * x))
    bound = math.exp(1.0 - b / (alpha * mu))
    if freq > bound + 3.0 * binomial_se(bound, x.size):
        raise AssertionError(
            f"tail frequency {freq:.6g} exceeds bound {bound:.6g} + 3 SE"
        )
    return freq, bound


# --------------------------------------------------------------------------
# partition and coupling


@dataclass(frozen=True)
class Partition:
    """Blocks A_1..A_k of consecutive vertices (size ceil(n^(1-eps))) and the
    remainder B."""

    n: int
    epsilon: float
    k: int
    n_a: int

    @classmethod
    def make(cls, n: int, epsilon: float, k: int) -> "Partition":
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if k < 1:
            raise ValueError("k must be at least 1")
        n_a = math.ceil(n ** (1.0 - epsilon))
        if k * n_a >= n:
            raise ValueError(
                f"k * ceil(n^(1-eps)) = {k * n_a} leaves no B vertices at n={n}"
            )
        return cls(n=n, epsilon=epsilon, k=k, n_a=n_a)

    @property
    def n_b(self) -> int:
        return self.n - self.k * self.n_a

    def block(self, j: int) -> range:
        """Vertices of A_j (1-based, j in 1..k)."""
        if not 1 <= j <= self.k:
            raise ValueError(f"block index must lie in 1..{self.k}")
        return range((j - 1) * self.n_a + 1, j * self.n_a + 1)

    @property
    def a_vertices(self) -> range:
        return range(1, self.k * self.n_a + 1)

    @property
    def b_vertices(self) -> range:
        return range(self.k * self.n_a + 1, self.n + 1)


@dataclass(frozen=True)
class CouplingSpec:
    """Partition plus one chosen vertex per block and the (b, mu) parameters.

    ``b = (1 - 2 eps) ln n / n`` and ``mu = 1/|B|``.  At eps = 1/2 the shift
    b degenerates to exactly 0; the coupling is then the identity and only
    block-initial choices keep the conditioning event possible, so they are
    required in that case.
    """

    partition: Partition
    chosen: tuple[int, ...]
    b: float
    mu: float

    @classmethod
    def make(
        cls, partition: Partition, chosen=None
    ) -> "CouplingSpec":
        if chosen is None:
            chosen = tuple(partition.block(j)[0] for j in range(1, partition.k + 1))
        chosen = tuple(int(v) for v in chosen)
        if len(chosen) != partition.k:
            raise ValueError("need exactly one chosen vertex per block")
        for j, l in enumerate(chosen, start=1):
            if l not in partition.block(j):
                raise ValueError(f"chosen vertex {l} is not in block A_{j}")
        b = (1.0 - 2.0 * partition.epsilon) * math.log(partition.n) / partition.n
        if b < 0:
            raise ValueError("epsilon > 1/2 makes the shift b negative")
        if b == 0.0 and any(
            l != partition.block(j)[0] for j, l in enumerate(chosen, 1)
        ):
            raise ValueError(
                "b = 0 (eps = 1/2): only block-initial chosen vertices keep "
                "the conditioning event possible"
            )
        return cls(partition=partition, chosen=chosen, b=b, mu=1.0 / partition.n_b)


def u_minima(inst: Instance, part: Partition) -> np.ndarray:
    """U_i = min over B of T_{i,m} for each A-vertex; ``out[i-1]`` is U_i.

    Each U_i is exponential with rate |B| (mean 1/|B|), independently.
    """
    if part.n != inst.n:
        raise ValueError("partition size does not match the instance")
    w = inst.full()
    a_hi = part.k * part.n_a
    return w[:a_hi, a_hi:].min(axis=1)


def _u_prime(u: np.ndarray, spec: CouplingSpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-A-vertex U' and the additive row shift delta = U' - U.

    delta is computed branch-wise so the chosen rows shift by exactly b.
    """
    part = spec.partition
    delta = np.zeros(part.k * part.n_a)
    for j in range(1, part.k + 1):
        l = spec.chosen[j - 1]
        for i in part.block(j):
            if i < l:
                delta[i - 1] = f_transform(u[i - 1], spec.mu, spec.b) - u[i - 1]
            elif i == l:
                delta[i - 1] = spec.b
    return u + delta, delta


def apply_coupling(inst: Instance, spec: CouplingSpec) -> Instance:
    """Reweighted instance T' with T'_{im} = T_{im} - U_i + U'_i on A-to-B
    edges and T' = T elsewhere.

    The chosen rows shift by exactly b; rows after the chosen vertex are
    untouched bitwise.  All weights stay positive (U_i <= T_{im} on B and
    U'_i >= 0), which is asserted.
    """
    part = spec.partition
    if part.n != inst.n:
        raise ValueError("partition size does not match the instance")
    u = u_minima(inst, part)
    _, delta = _u_prime(u, spec)
    tri = np.array(inst.tri)
    n, a_hi = inst.n, part.k * part.n_a
    for i in range(1, a_hi + 1):
        if delta[i - 1] != 0.0:
            start = Instance.tri_index(n, i, a_hi + 1)
            tri[start : start + n - a_hi] += delta[i - 1]
    if np.any(tri <= 0.0):
        raise AssertionError("coupling produced a nonpositive weight")
    return Instance(n, tri, seed=None)


def coupling_law_check(
    n: int,
    epsilon: float,
    k: int,
    trials: int,
    rng: np.random.Generator,
    chosen=None,
    min_accept_rate: float = 1e-4,
) -> float:
    """Equality-in-law test for the coupling, via rejection sampling.

    Pipeline (a) applies the coupling to unconditioned instances; pipeline
    (b) rejection-samples instances conditioned on the event that, within
    each block, the chosen vertex is the first whose U exceeds b.  For each
    summary coordinate (U at the first chosen vertex, and the Steiner weight
    of the chosen set) the two empirical CDFs are compared; returns the
    largest sup distance.
    """
    part = Partition.make(n, epsilon, k)
    spec = CouplingSpec.make(part, chosen)
    n_edges = n * (n - 1) // 2

    def fresh() -> Instance:
        return Instance(n, -np.log1p(-rng.random(n_edges)), seed=None)

    def summaries(inst: Instance) -> tuple[float, float]:
        u = u_minima(inst, part)
        return float(u[spec.chosen[0] - 1]), steiner_exact(inst, spec.chosen).weight

    def event_holds(u: np.ndarray) -> bool:
        for j in range(1, part.k + 1):
            l = spec.chosen[j - 1]
            if u[l - 1] <= spec.b:
                return False
            if any(u[i - 1] > spec.b for i in part.block(j) if i < l):
                return False
        return True

    coupled = np.empty((trials, 2))
    for t in range(trials):
        coupled[t] = summaries(apply_coupling(fresh(), spec))

    conditioned = np.empty((trials, 2))
    accepted = attempts = 0
    while accepted < trials:
        attempts += 1
        inst = fresh()
        if event_holds(u_minima(inst, part)):
            conditioned[accepted] = summaries(inst)
            accepted += 1
        if (
            attempts >= max(1000, 10.0 / min_accept_rate)
            and accepted / attempts < min_accept_rate
        ):
            raise CapabilityError(
                f"rejection acceptance rate {accepted / attempts:.2e} fell "
                f"below {min_accept_rate:.0e}"
            )
    return max(
        ks_two_sample(coupled[:, c], conditioned[:, c]) for c in range(2)
    )


def lower_bound_conditions(inst: Instance, spec: CouplingSpec) -> dict[str, bool]:
    """Diagnostic: which of the three lower-bound conditions hold here.

    * shrink: U'_i >= (1 - 2 eps) U_i for every A-vertex;
    * chosen_far: T_{i, l_j} >= (2k - 1) ln n / n for every A-vertex i and
      every chosen l_j (i = l_j itself excluded: no self edge);
    * steiner_heavy: w(chosen set) > (k - 1 - eps) ln n / n.
    """
    part = spec.partition
    u = u_minima(inst, part)
    u_prime, _ = _u_prime(u, spec)
    shrink = bool(np.all(u_prime >= (1.0 - 2.0 * part.epsilon) * u))

    cut = (2.0 * part.k - 1.0) * math.log(part.n) / part.n
    chosen_far = all(
        inst.weight(i, l) >= cut
        for l in spec.chosen
        for i in part.a_vertices
        if i != l
    )

    w_chosen = steiner_exact(inst, spec.chosen).weight
    steiner_heavy = bool(
        w_chosen > (part.k - 1.0 - part.epsilon) * math.log(part.n) / part.n
    )
    return {
        "shrink": shrink,
        "chosen_far": chosen_far,
        "steiner_heavy": steiner_heavy,
    }
