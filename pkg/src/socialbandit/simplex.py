"""Exact arithmetic on probability simplices.

All policies are 1-D numpy arrays of length K >= 2 with entries in [0, 1]
summing to one. Entropy and KL are in nats. The 0 * log 0 = 0 convention
applies throughout; log(0) inside a KL term is an error rather than inf,
because every caller that needs positivity regularizes first.
"""

from __future__ import annotations

import numpy as np

from .errors import DivergenceUndefinedError, InvalidPolicyError, ParameterError

# Inputs whose sum drifts at most this far from one are renormalized;
# anything worse is rejected as a real bug rather than float noise.
SUM_TOLERANCE = 1e-6


def as_policy(values) -> np.ndarray:
    """Validate (and renormalize within tolerance) a probability vector."""
    p = np.asarray(values, dtype=np.float64)
    if p.ndim != 1 or p.size < 2:
        raise InvalidPolicyError(f"policy must be a 1-D vector of length >= 2, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidPolicyError("policy contains non-finite entries")
    if np.any(p < -1e-12) or np.any(p > 1.0 + 1e-9):
        raise InvalidPolicyError("policy entries must lie in [0, 1]")
    total = float(p.sum())
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise InvalidPolicyError(f"policy entries sum to {total!r}, not 1")
    if total != 1.0:
        p = p / total
    return np.clip(p, 0.0, 1.0)


def uniform_policy(size: int) -> np.ndarray:
    """Uniform distribution over `size` actions."""
    if size < 2:
        raise ParameterError(f"need at least 2 actions, got {size}")
    return np.full(size, 1.0 / size)


def entropy(p) -> float:
    """Shannon entropy -sum p log p in nats; 0 <= H <= log K."""
    p = as_policy(p)
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def kl_divergence(p, q) -> float:
    """KL(p || q) in nats; zero iff p == q elementwise.

    Raises DivergenceUndefinedError when q has a zero where p carries mass;
    callers must regularize rather than rely on an infinite result.
    """
    p = as_policy(p)
    q = as_policy(q)
    if p.size != q.size:
        raise InvalidPolicyError(f"length mismatch: {p.size} vs {q.size}")
    mask = p > 0.0
    if np.any(q[mask] <= 0.0):
        raise DivergenceUndefinedError("q has zero mass where p is positive; regularize first")
    val = float((p[mask] * np.log(p[mask] / q[mask])).sum())
    return max(val, 0.0)


def regularize(p, floor: float) -> np.ndarray:
    """Mix in a small positive floor and renormalize: (p + floor) / (1 + K * floor).

    Every output entry lands in [floor/(1 + K*floor), (1 + floor)/(1 + K*floor)],
    so all downstream logarithms stay bounded. Order of entries is preserved.
    """
    if not floor > 0.0:
        raise ParameterError(f"floor must be > 0, got {floor}")
    p = as_policy(p)
    return (p + floor) / (1.0 + p.size * floor)


def mix_uniform(p, weight: float) -> np.ndarray:
    """Linear blend (1 - weight) * p + weight * uniform."""
    if not 0.0 <= weight <= 1.0:
        raise ParameterError(f"mixing weight must be in [0, 1], got {weight}")
    p = as_policy(p)
    return (1.0 - weight) * p + weight / p.size


def sample_action(p, rng: np.random.Generator) -> int:
    """Draw one action index from a policy, consuming exactly one uniform.

    Inverse-CDF sampling keeps the draw deterministic given the generator
    state and independent of how the policy was produced.
    """
    p = as_policy(p)
    edges = np.cumsum(p)
    idx = int(np.searchsorted(edges, rng.random(), side="right"))
    return min(idx, p.size - 1)
