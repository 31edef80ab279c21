"""Random complete-graph instances with i.i.d. Exp(1) edge weights.

Reproducibility contract
------------------------
Streams are derived from a :class:`Seed` triple ``(master, purpose, trial)``:

* ``purpose`` is hashed to 64 bits with BLAKE2b (``digest_size=8``, little
  endian);
* ``SeedSequence([master, purpose_hash, trial])`` keys a Philox-4x64 counter
  generator (splittable: distinct triples give unrelated streams and never
  share state);
* uniforms are the generator's standard 53-bit doubles in ``[0, 1)``, i.e.
  ``(next_uint64 >> 11) * 2**-53``;
* exponentials come from the inverse CDF, ``-log1p(-u)``.

Every step is a published, platform-independent algorithm, so the same triple
yields bit-identical weight arrays everywhere.  ``tests/test_instance.py``
pins golden values to catch any drift in the numpy layers.

Storage layout
--------------
Weights live in a packed upper-triangular array in row-major order over pairs
``i < j`` (vertices are labelled 1..n):

    (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n)

so edge ``(i, j)`` with ``i < j`` sits at offset

    (i - 1) * (2n - i) // 2 + (j - i - 1).

The uniform draws fill the array in exactly this order.  Because the
generator's uniforms live in ``[0, 1)``, a weight of ``+inf`` is impossible;
a weight of exactly ``0.0`` would require a raw draw of ``u == 0`` (one
lattice point out of 2**53) and is rejected at generation time rather than
silently passed through.

The model only makes sense for exponential-like weights near 0; other weight
families with non-vanishing density at the origin behave the same
asymptotically but are out of scope here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from hashlib import blake2b

import numpy as np

from .errors import CapabilityError

__all__ = ["Seed", "Instance", "sample_exp", "gen_instance", "MAX_VERTICES"]

# Default vertex cap: packed triangle (n(n-1)/2 doubles) plus one cached dense
# matrix stay around 300 MB.
MAX_VERTICES = 5000


@dataclass(frozen=True)
class Seed:
    """Key of one reproducible random stream.

    ``master`` identifies the whole experiment; ``purpose`` and ``trial``
    label independent substreams within it.
    """

    master: int
    purpose: str = "default"
    trial: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master) < 2**64:
            raise ValueError("master seed must be a 64-bit unsigned integer")
        if int(self.trial) < 0:
            raise ValueError("trial index must be nonnegative")

    def with_labels(self, purpose: str, trial: int) -> "Seed":
        return replace(self, purpose=purpose, trial=trial)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this triple's stream."""
        purpose_hash = int.from_bytes(
            blake2b(self.purpose.encode("utf-8"), digest_size=8).digest(), "little"
        )
        ss = np.random.SeedSequence([int(self.master), purpose_hash, int(self.trial)])
        return np.random.Generator(np.random.Philox(ss))


def sample_exp(u):
    """Inverse-CDF transform of a uniform: ``-ln(1 - u)``, unit mean.

    Accepts a scalar or array in ``[0, 1)``.  Uses ``log1p`` for accuracy
    near ``u = 0``.
    """
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise ValueError("uniform input must lie in [0, 1)")
    out = -np.log1p(-arr)
    return float(out) if np.isscalar(u) or arr.ndim == 0 else out


class Instance:
    """A realized complete graph on ``n`` vertices with positive edge weights.

    Immutable after construction; safe to share across threads.  ``seed`` is
    the :class:`Seed` that produced the weights, or ``None`` for derived
    instances (e.g. coupled reweightings).
    """

    __slots__ = ("n", "tri", "seed", "_full")

    def __init__(self, n: int, tri: np.ndarray, seed: Seed | None = None):
        tri = np.asarray(tri, dtype=np.float64)
        if n < 2:
            raise ValueError("an instance needs at least 2 vertices")
        if tri.shape != (n * (n - 1) // 2,):
            raise ValueError(
                f"weight array has shape {tri.shape}, expected ({n * (n - 1) // 2},)"
            )
        if not np.all(np.isfinite(tri)) or np.any(tri <= 0.0):
            raise ValueError("edge weights must be strictly positive and finite")
        tri = tri.copy()
        tri.flags.writeable = False
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "tri", tri)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "_full", None)

    def __setattr__(self, name, value):
        raise AttributeError("Instance is immutable")

    def __repr__(self):
        return f"Instance(n={self.n}, seed={self.seed!r})"

    @property
    def n_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    @staticmethod
    def tri_index(n: int, i: int, j: int) -> int:
        """Packed offset of edge (i, j), vertices 1-based, i != j."""
        if i == j:
            raise ValueError("no self loops: i == j")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"vertex out of range 1..{n}")
        if i > j:
            i, j = j, i
        return (i - 1) * (2 * n - i) // 2 + (j - i - 1)

    def weight(self, i: int, j: int) -> float:
        """Weight of edge (i, j) = (j, i); raises on i == j or out of range."""
        return float(self.tri[self.tri_index(self.n, i, j)])

    def full(self) -> np.ndarray:
        """Dense symmetric (n, n) matrix, ``+inf`` on the diagonal.

        Built lazily and cached; read-only.  Row/column ``v-1`` corresponds
        to vertex ``v``.
        """
        if self._full is None:
            n = self.n
            w = np.full((n, n), np.inf)
            iu = np.triu_indices(n, k=1)
            w[iu] = self.tri
            w[(iu[1], iu[0])] = self.tri
            w.flags.writeable = False
            object.__setattr__(self, "_full", w)
        return self._full


def gen_instance(n: int, seed: Seed, max_vertices: int = MAX_VERTICES) -> Instance:
    """Sample an instance: n(n-1)/2 weights, packed row-major over i < j.

    Pure function of ``(n, seed)``: repeated calls return bit-identical
    arrays.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > max_vertices:
        raise CapabilityError(
            f"n={n} exceeds the configured vertex cap {max_vertices}; "
            "raise max_vertices if you have the memory for n(n-1)/2 doubles"
        )
    gen = seed.generator()
    u = gen.random(n * (n - 1) // 2)
    tri = -np.log1p(-u)
    if np.any(tri == 0.0):
        # One raw draw in 2**53 hits u == 0 exactly; refuse rather than emit
        # a zero-weight edge.
        raise ValueError(
            f"seed {seed} produced a zero weight (u == 0); use another trial index"
        )
    return Instance(n, tri, seed)
