"""The free-energy criterion over candidate behavior policies.

For a candidate policy pi, a reference policy ref (the agent's own
posterior-optimality policy) and an estimated behavior policy est, the
criterion is

    F(pi) = tradeoff * KL(pi || ref) + H(pi) + KL(pi || est),

with tradeoff strictly between 0 and 1. Its minimizer over the simplex has
the closed form pi*(a) proportional to ref(a) * est(a)^(1/tradeoff), with
normalizer Z, and the minimum value is exactly -tradeoff * log Z. The
social agent computes one (pi*, Z) pair per observed agent (and one for
itself) and follows the candidate with the smallest minimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidPolicyError, ParameterError, RegularizationRequiredError
from .simplex import as_policy


def check_tradeoff(tradeoff: float) -> float:
    if not 0.0 < tradeoff < 1.0:
        raise ParameterError(f"tradeoff constant must lie strictly between 0 and 1, got {tradeoff}")
    return float(tradeoff)


def _require_positive(p: np.ndarray, name: str) -> None:
    if np.any(p <= 0.0):
        raise RegularizationRequiredError(f"{name} has zero entries; apply the floor first")


def candidate_policies(ref: np.ndarray, est: np.ndarray, tradeoff: float):
    """Vectorized closed-form minimizers for a batch of estimated policies.

    `est` has one row per agent. Work happens in log space because
    est^(1/tradeoff) underflows for small entries and small tradeoffs.
    Returns (candidates, partitions) with one row / one value per agent.
    """
    check_tradeoff(tradeoff)
    ref = np.asarray(ref, dtype=np.float64)
    est = np.atleast_2d(np.asarray(est, dtype=np.float64))
    _require_positive(ref, "reference policy")
    _require_positive(est, "estimated policy")
    log_w = np.log(ref)[None, :] + np.log(est) / tradeoff
    peak = log_w.max(axis=1, keepdims=True)
    log_z = peak[:, 0] + np.log(np.exp(log_w - peak).sum(axis=1))
    candidates = np.exp(log_w - log_z[:, None])
    return candidates, np.exp(log_z)


def candidate_policy(ref, est, tradeoff: float):
    """Closed-form minimizer of the criterion for one estimated policy.

    Returns (candidate, partition) where partition is the normalizer
    sum_a ref(a) * est(a)^(1/tradeoff), always in (0, 1] for valid inputs.
    """
    ref = as_policy(ref)
    est = as_policy(est)
    if ref.size != est.size:
        raise InvalidPolicyError(f"length mismatch: {ref.size} vs {est.size}")
    candidates, partitions = candidate_policies(ref, est, tradeoff)
    return candidates[0], float(partitions[0])


def free_energy(pi, ref, est, tradeoff: float) -> float:
    """Evaluate the criterion at an arbitrary policy pi.

    pi may touch the simplex boundary (0 log 0 = 0); ref and est must be
    strictly positive.
    """
    check_tradeoff(tradeoff)
    pi = as_policy(pi)
    ref = as_policy(ref)
    est = as_policy(est)
    if not pi.size == ref.size == est.size:
        raise InvalidPolicyError("policy lengths differ")
    _require_positive(ref, "reference policy")
    _require_positive(est, "estimated policy")
    mask = pi > 0.0
    p = pi[mask]
    self_term = float((p * np.log(p)).sum())
    return tradeoff * self_term - float((p * (tradeoff * np.log(ref[mask]) + np.log(est[mask]))).sum())


def free_energy_min(partition: float, tradeoff: float) -> float:
    """Value of the criterion at its minimizer: -tradeoff * log(partition)."""
    check_tradeoff(tradeoff)
    if not partition > 0.0:
        raise InvalidPolicyError(f"partition value must be positive, got {partition}")
    return -tradeoff * float(np.log(partition))


def select_agent(energies, self_id):
    """Id achieving the minimum energy; exact ties prefer self, then lowest id.

    `energies` is a sequence of (agent_id, energy) pairs that must include
    the selecting agent itself.
    """
    pairs = list(energies)
    if not pairs:
        raise InvalidPolicyError("cannot select from an empty energy list")
    ids = [i for i, _ in pairs]
    if self_id not in ids:
        raise InvalidPolicyError(f"self id {self_id!r} missing from energy list")
    best = min(value for _, value in pairs)
    tied = [i for i, value in pairs if value == best]
    return self_id if self_id in tied else min(tied)


@dataclass(frozen=True)
class FreeEnergyReport:
    """One decision round: per-agent partitions, energies, candidates, and the pick."""

    agent_ids: tuple
    partitions: np.ndarray
    energies: np.ndarray
    candidates: np.ndarray
    selected: int
    behavior: np.ndarray

    @property
    def per_agent(self):
        """(agent_id, partition, energy, candidate) tuples in society order."""
        return [
            (self.agent_ids[i], float(self.partitions[i]), float(self.energies[i]), self.candidates[i])
            for i in range(len(self.agent_ids))
        ]
