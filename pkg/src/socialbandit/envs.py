"""Bernoulli bandit instances, presets, and the observation noise channel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidPolicyError, ParameterError

# Ten-armed presets keyed by the gap between the best and second-best arm.
# The best arm pays 0.9 in every preset.
PRESET_MEANS = {
    "delta02": (0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.9),
    "delta01": (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    "delta005": (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.9),
}

_GAP_ALIASES = {0.2: "delta02", 0.1: "delta01", 0.05: "delta005"}


@dataclass(frozen=True)
class BanditInstance:
    """Immutable Bernoulli instance: one success probability per arm."""

    means: tuple

    def __post_init__(self):
        if len(self.means) < 2:
            raise ParameterError("an instance needs at least two arms")
        if any(not 0.0 <= m <= 1.0 for m in self.means):
            raise ParameterError(f"arm means must lie in [0, 1], got {self.means}")
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))

    @property
    def n_arms(self) -> int:
        return len(self.means)

    @property
    def optimal_index(self) -> int:
        return int(np.argmax(self.means))

    @property
    def optimal_mean(self) -> float:
        return max(self.means)

    @property
    def gap(self) -> float:
        ordered = sorted(self.means, reverse=True)
        return ordered[0] - ordered[1]


def preset_instance(preset) -> BanditInstance:
    """Ten-armed preset by name ('delta02', 'delta01', 'delta005') or gap value."""
    key = _GAP_ALIASES.get(preset, preset)
    if key not in PRESET_MEANS:
        raise ConfigurationError(f"unknown preset {preset!r}; choose from {sorted(PRESET_MEANS)}")
    return BanditInstance(PRESET_MEANS[key])


def two_arm_instance(gap: float) -> BanditInstance:
    """Two arms at 0.5 and 0.5 + gap; gap 0 keeps arm 0 as the nominal optimum."""
    if not 0.0 <= gap <= 0.5:
        raise ParameterError(f"two-arm gap must lie in [0, 0.5], got {gap}")
    return BanditInstance((0.5, 0.5 + gap))


def pull(instance: BanditInstance, action: int, rng: np.random.Generator) -> int:
    """Draw a binary reward for one arm."""
    if not 0 <= action < instance.n_arms:
        raise InvalidPolicyError(f"action {action} out of range [0, {instance.n_arms})")
    return 1 if rng.random() < instance.means[action] else 0


def noisy_observation(action: int, flip_prob: float, n_actions: int, rng: np.random.Generator) -> int:
    """Observation channel: with probability flip_prob, substitute a different action.

    The substitute is uniform over the n_actions - 1 actions other than the
    true one, so P(output = b | input = a) = flip_prob / (n_actions - 1) for
    every b != a. Always consumes one uniform for the flip decision.
    """
    if not 0.0 <= flip_prob <= 1.0:
        raise ParameterError(f"flip probability must be in [0, 1], got {flip_prob}")
    if n_actions < 2:
        raise ParameterError(f"noise channel needs at least 2 actions, got {n_actions}")
    if not 0 <= action < n_actions:
        raise InvalidPolicyError(f"action {action} out of range [0, {n_actions})")
    if rng.random() >= flip_prob:
        return action
    other = int(rng.integers(n_actions - 1))
    return other + 1 if other >= action else other
