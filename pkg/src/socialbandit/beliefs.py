"""Beta-Bernoulli beliefs and posterior-optimality policy estimation.

The probability that each arm is the best one under the current posteriors
is estimated by joint posterior sampling: draw one value per arm, count the
argmax, repeat. For two arms the same quantity has a one-dimensional
integral form, which serves as the independent oracle for the sampler.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import InvalidPolicyError, NumericFailureError, ParameterError


@dataclass(frozen=True)
class BetaPosterior:
    """Beta(alpha, beta) pseudo-count belief over a Bernoulli mean."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0.0 and self.beta > 0.0):
            raise ParameterError(f"Beta parameters must be positive, got ({self.alpha}, {self.beta})")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


def bayes_update(posterior: BetaPosterior, reward) -> BetaPosterior:
    """Conjugate update for a binary reward: success to alpha, failure to beta."""
    if reward not in (0, 1):
        raise InvalidPolicyError(f"reward must be 0 or 1, got {reward!r}")
    r = int(reward)
    return BetaPosterior(posterior.alpha + r, posterior.beta + (1 - r))


class BeliefState:
    """Per-arm Beta posteriors for one agent, starting from Beta(1, 1)."""

    def __init__(self, n_arms: int):
        if n_arms < 1:
            raise ParameterError(f"need at least one arm, got {n_arms}")
        self.alphas = np.ones(n_arms)
        self.betas = np.ones(n_arms)

    @property
    def n_arms(self) -> int:
        return self.alphas.size

    def update(self, arm: int, reward) -> None:
        if reward not in (0, 1):
            raise InvalidPolicyError(f"reward must be 0 or 1, got {reward!r}")
        r = int(reward)
        self.alphas[arm] += r
        self.betas[arm] += 1 - r

    def posterior(self, arm: int) -> BetaPosterior:
        return BetaPosterior(float(self.alphas[arm]), float(self.betas[arm]))

    @property
    def means(self) -> np.ndarray:
        return self.alphas / (self.alphas + self.betas)


def ts_policy_mc(belief: BeliefState, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Monte Carlo estimate of the probability each arm is best.

    Draws `samples` joint samples (one per arm from its posterior) and
    counts the winner of each round; argmax ties are broken uniformly at
    random so symmetric posteriors stay symmetric.
    """
    if samples < 1:
        raise ParameterError(f"sample count must be >= 1, got {samples}")
    draws = rng.beta(belief.alphas, belief.betas, size=(samples, belief.n_arms))
    top = draws.max(axis=1, keepdims=True)
    is_top = draws == top
    winners = np.argmax(is_top, axis=1)
    n_top = is_top.sum(axis=1)
    for row in np.nonzero(n_top > 1)[0]:
        tied = np.flatnonzero(is_top[row])
        winners[row] = tied[rng.integers(tied.size)]
    counts = np.bincount(winners, minlength=belief.n_arms)
    return counts / float(samples)


def ts_policy_exact_2arm(a: BetaPosterior, b: BetaPosterior, abs_tol: float = 1e-6) -> float:
    """P(X > Y) for X ~ a, Y ~ b by adaptive quadrature.

    Integrates pdf_a(x) * cdf_b(x) over [0, 1]; used as the oracle for the
    two-arm sampler. Raises NumericFailureError when the quadrature error
    estimate exceeds `abs_tol`.
    """
    log_norm = special.betaln(a.alpha, a.beta)

    def integrand(x):
        log_pdf = (a.alpha - 1.0) * np.log(x) + (a.beta - 1.0) * np.log1p(-x) - log_norm
        return np.exp(log_pdf) * special.betainc(b.alpha, b.beta, x)

    value, err = integrate.quad(integrand, 0.0, 1.0, epsabs=abs_tol * 1e-2, epsrel=1e-10, limit=200)
    if not np.isfinite(value) or err > abs_tol:
        raise NumericFailureError(f"quadrature error estimate {err} exceeds tolerance {abs_tol}")
    return min(max(float(value), 0.0), 1.0)
