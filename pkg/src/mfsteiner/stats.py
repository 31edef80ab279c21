"""Small statistics helpers: empirical-CDF distances and the DKW bound."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["dkw_epsilon", "ks_distance_to_cdf", "ks_two_sample", "binomial_se"]


def dkw_epsilon(n_samples: int, alpha: float = 0.01) -> float:
    """Dvoretzky-Kiefer-Wolfowitz radius: sup |F_hat - F| <= eps w.p. 1-alpha."""
    if n_samples < 1 or not 0 < alpha < 1:
        raise ValueError("need n_samples >= 1 and alpha in (0, 1)")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n_samples))


def ks_distance_to_cdf(sample, cdf) -> float:
    """sup_t |F_hat(t) - F(t)| for a callable CDF, evaluated at the jumps."""
    xs = np.sort(np.asarray(sample, dtype=np.float64))
    n = xs.size
    if n == 0:
        raise ValueError("empty sample")
    f = np.asarray(cdf(xs), dtype=np.float64)
    grid = np.arange(1, n + 1) / n
    return float(max(np.max(grid - f), np.max(f - (grid - 1.0 / n))))


def ks_two_sample(a, b) -> float:
    """sup_t |F_a(t) - F_b(t)| between two empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    joint = np.concatenate([a, b])
    fa = np.searchsorted(a, joint, side="right") / a.size
    fb = np.searchsorted(b, joint, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def binomial_se(p: float, n_samples: int) -> float:
    """Standard error of a frequency estimated from n samples at rate p."""
    return math.sqrt(max(p * (1.0 - p), 0.0) / n_samples)
