"""Social bandit learning: free-energy agent selection over observed behavior.

A simulation library and CLI for stochastic Bernoulli bandits in which one
social learner watches the actions (never the rewards) of other agents,
scores each agent's estimated behavior policy with a free-energy criterion,
and follows whichever candidate policy scores best, falling back to its own
posterior-sampling policy when nobody is worth copying.
"""

from .beliefs import BeliefState, BetaPosterior, bayes_update, ts_policy_exact_2arm, ts_policy_mc
from .behavior import BehaviorCounts, estimate_policy, init_counts, restrict_observation
from .config import AgentSpec, Hyperparameters, SocietyConfig
from .envs import BanditInstance, noisy_observation, preset_instance, pull, two_arm_instance
from .free_energy import (
    FreeEnergyReport,
    candidate_policy,
    free_energy,
    free_energy_min,
    select_agent,
)
from .harness import (
    AggregateCurves,
    ExperimentResult,
    RunRecord,
    complexity_probe,
    regret_curves,
    run_experiment,
    run_single,
)
from .simplex import entropy, kl_divergence, mix_uniform, regularize, sample_action, uniform_policy

__version__ = "0.1.0"

__all__ = [
    "AgentSpec",
    "AggregateCurves",
    "BanditInstance",
    "BehaviorCounts",
    "BeliefState",
    "BetaPosterior",
    "ExperimentResult",
    "FreeEnergyReport",
    "Hyperparameters",
    "RunRecord",
    "SocietyConfig",
    "bayes_update",
    "candidate_policy",
    "complexity_probe",
    "entropy",
    "estimate_policy",
    "free_energy",
    "free_energy_min",
    "init_counts",
    "kl_divergence",
    "mix_uniform",
    "noisy_observation",
    "preset_instance",
    "pull",
    "regret_curves",
    "regularize",
    "restrict_observation",
    "run_experiment",
    "run_single",
    "sample_action",
    "select_agent",
    "ts_policy_exact_2arm",
    "ts_policy_mc",
    "two_arm_instance",
    "uniform_policy",
]
