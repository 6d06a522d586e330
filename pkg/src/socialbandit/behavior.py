"""Estimation of other agents' action distributions from observed choices.

Each observed agent gets an exponentially weighted count vector over the
observer's own action set, initialized to all ones so early estimates stay
close to uniform. Normalizing, blending with the uniform policy, and
flooring yields a strictly positive estimated behavior policy.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError, InvalidPolicyError, ParameterError
from .simplex import mix_uniform, regularize


class BehaviorCounts:
    """Exponential moving average of one agent's observed action choices."""

    def __init__(self, size: int, step: float):
        if size < 2:
            raise ParameterError(f"need at least 2 actions, got {size}")
        if not 0.0 <= step <= 1.0:
            raise ParameterError(f"EMA step must be in [0, 1], got {step}")
        self.counts = np.ones(size)
        self.step = step

    @property
    def size(self) -> int:
        return self.counts.size

    def observe(self, action: int) -> None:
        """Decay every count by (1 - step) and add step to the observed action."""
        if not 0 <= action < self.counts.size:
            raise InvalidPolicyError(f"action index {action} out of range [0, {self.counts.size})")
        self.counts *= 1.0 - self.step
        self.counts[action] += self.step

    def estimate(self, smoothing: float, floor: float) -> np.ndarray:
        """Normalized counts, blended toward uniform, then floored strictly positive."""
        total = float(self.counts.sum())
        if total <= 0.0:
            raise InvalidPolicyError("cannot estimate a policy from all-zero counts")
        return regularize(mix_uniform(self.counts / total, smoothing), floor)


def init_counts(size: int, step: float) -> BehaviorCounts:
    """Fresh estimator with every count equal to one (uniform prior belief)."""
    return BehaviorCounts(size, step)


def ema_update(counts: BehaviorCounts, observed: int) -> BehaviorCounts:
    """Apply one observation in place and return the estimator."""
    counts.observe(observed)
    return counts


def estimate_policy(counts: BehaviorCounts, smoothing: float, floor: float) -> np.ndarray:
    return counts.estimate(smoothing, floor)


def action_set_lookup(action_set, catalog_size: int) -> np.ndarray:
    """Map global catalog indices to local positions; -1 marks absent actions."""
    lookup = np.full(catalog_size, -1, dtype=np.int64)
    for local, global_index in enumerate(action_set):
        if not 0 <= global_index < catalog_size:
            raise ConfigurationError(
                f"action {global_index} is outside the catalog of {catalog_size} actions"
            )
        lookup[global_index] = local
    return lookup


def restrict_observation(observed: int, lookup: np.ndarray):
    """Local index of an observed catalog action, or None when it maps nowhere.

    Observations that fall outside the observer's own action set are dropped;
    the caller skips the count update for that agent on that trial.
    """
    if not 0 <= observed < lookup.size:
        raise ConfigurationError(f"observed action {observed} is not in the catalog")
    local = int(lookup[observed])
    return None if local < 0 else local
