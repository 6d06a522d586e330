"""The agent zoo: non-learners, individual learners, and social learners.

Every agent lives on its own action set, a subset of the environment's
catalog. Internally agents index actions locally; `act` returns catalog
indices so observers can interpret them. Agents never see other agents'
rewards, only (possibly noise-corrupted) actions, and only the social
kinds look at those at all.

The tucb and oucb baselines are reconstructions: the algorithms they
approximate are defined in external work and only their qualitative
behavior is relied on here. They stay disabled unless a society opts in.
"""

from __future__ import annotations

import math

import numpy as np

from .behavior import BehaviorCounts, action_set_lookup, restrict_observation
from .beliefs import BeliefState, ts_policy_mc
from .config import AgentSpec, Hyperparameters, SocietyConfig
from .envs import BanditInstance
from .errors import ConfigurationError
from .free_energy import FreeEnergyReport, candidate_policies, free_energy_min, select_agent
from .simplex import regularize, sample_action
from .streams import StreamBundle


def ucb_index(total_reward: float, pulls: int, trial, bonus_scale: float) -> float:
    """Optimistic index: empirical mean plus sqrt(2 * C * log(trial) / pulls).

    Unpulled arms get +inf so they are forced before any repeat.
    """
    if pulls <= 0:
        return math.inf
    return total_reward / pulls + math.sqrt(2.0 * bonus_scale * math.log(trial) / pulls)


class Agent:
    """Common bookkeeping: local action set, catalog mapping, last action."""

    learns_from_reward = False
    observes_society = False
    has_selection = False

    def __init__(self, index: int, spec: AgentSpec, instance: BanditInstance, hyper: Hyperparameters):
        self.index = index
        self.spec = spec
        self.hyper = hyper
        catalog = instance.n_arms
        self.actions = np.array(spec.action_set or range(catalog), dtype=np.int64)
        if self.actions.size < 2:
            raise ConfigurationError(f"agent {spec.name!r}: action set needs at least 2 actions")
        self.lookup = action_set_lookup(self.actions, catalog)
        self.own_means = np.array([instance.means[a] for a in self.actions])
        self.last_local = -1

    @property
    def n_actions(self) -> int:
        return self.actions.size

    def _emit(self, local: int) -> int:
        self.last_local = local
        return int(self.actions[local])

    def act(self, trial: int, streams: StreamBundle) -> int:
        raise NotImplementedError

    def observe_reward(self, reward: int) -> None:
        pass

    def observe_society(self, observations) -> None:
        pass

    @property
    def report(self):
        return None


# ---------------------------------------------------------------------------
# Non-learners
# ---------------------------------------------------------------------------


class OptimalAgent(Agent):
    """Always plays the highest-mean action in its own set."""

    def __init__(self, *args):
        super().__init__(*args)
        self._pick = int(np.argmax(self.own_means))

    def act(self, trial, streams):
        return self._emit(self._pick)


class SubOptimalAgent(Agent):
    """Always plays the second-highest-mean action in its own set."""

    def __init__(self, *args):
        super().__init__(*args)
        order = np.argsort(self.own_means)
        self._pick = int(order[-2])

    def act(self, trial, streams):
        return self._emit(self._pick)


class RandomAgent(Agent):
    """Uniform over its own action set, every trial."""

    def act(self, trial, streams):
        return self._emit(int(streams.action.integers(self.n_actions)))


class OpponentAgent(Agent):
    """Always plays the lowest-mean action in its own set."""

    def __init__(self, *args):
        super().__init__(*args)
        self._pick = int(np.argmin(self.own_means))

    def act(self, trial, streams):
        return self._emit(self._pick)


class POptimalAgent(Agent):
    """Plays the best action with a drifting probability, otherwise uniform.

    The per-trial probability is clamp(p_start + trial * p_step, 0, 1); at 1
    this is the optimal agent, at 0 the random agent. The random branch draws
    uniformly over the full own set, best action included.
    """

    def __init__(self, *args):
        super().__init__(*args)
        self._best = int(np.argmax(self.own_means))

    def act(self, trial, streams):
        p = min(max(self.spec.p_start + trial * self.spec.p_step, 0.0), 1.0)
        if streams.action.random() < p:
            return self._emit(self._best)
        return self._emit(int(streams.action.integers(self.n_actions)))


# ---------------------------------------------------------------------------
# Individual learners
# ---------------------------------------------------------------------------


class TSAgent(Agent):
    """Samples its action from the Monte Carlo posterior-optimality policy."""

    learns_from_reward = True

    def __init__(self, *args):
        super().__init__(*args)
        self.belief = BeliefState(self.n_actions)

    def act(self, trial, streams):
        policy = ts_policy_mc(self.belief, self.hyper.ts_samples, streams.policy)
        return self._emit(sample_action(policy, streams.action))

    def observe_reward(self, reward):
        self.belief.update(self.last_local, reward)


class CountingLearner(Agent):
    """Shared pull-count / reward-sum state for the index-based learners."""

    learns_from_reward = True

    def __init__(self, *args):
        super().__init__(*args)
        self.pulls = np.zeros(self.n_actions, dtype=np.int64)
        self.sums = np.zeros(self.n_actions)

    def observe_reward(self, reward):
        self.pulls[self.last_local] += 1
        self.sums[self.last_local] += reward

    def _empirical_means(self) -> np.ndarray:
        # Unpulled arms count as mean 0.
        means = np.zeros(self.n_actions)
        seen = self.pulls > 0
        means[seen] = self.sums[seen] / self.pulls[seen]
        return means


class UCBAgent(CountingLearner):
    """Classic optimistic index policy; ties go to the lowest index."""

    def act(self, trial, streams):
        unpulled = np.nonzero(self.pulls == 0)[0]
        if unpulled.size:
            return self._emit(int(unpulled[0]))
        idx = [ucb_index(self.sums[a], int(self.pulls[a]), trial + 1, self.hyper.ucb_c)
               for a in range(self.n_actions)]
        return self._emit(int(np.argmax(idx)))


class EpsGreedyAgent(CountingLearner):
    """Explore uniformly with decaying probability, otherwise play the greedy arm."""

    def act(self, trial, streams):
        eps = self.hyper.eps0 * self.hyper.eps_decay ** trial
        if streams.action.random() < eps:
            return self._emit(int(streams.action.integers(self.n_actions)))
        return self._emit(int(np.argmax(self._empirical_means())))


# ---------------------------------------------------------------------------
# Social learners
# ---------------------------------------------------------------------------


class SBLFEAgent(Agent):
    """Follows the candidate policy with the minimum free energy each trial.

    Per trial: estimate the posterior-optimality policy by sampling, floor
    it, build each agent's estimated behavior policy (its own included,
    from its own executed actions), take the closed-form candidate and its
    energy per agent, and sample from the winner's candidate. Scoring
    itself through the same moving-average estimate as everyone else is
    load-bearing: when the agent is following someone, its self estimate
    mirrors that play, keeps the two energies close, and the estimation
    jitter makes it intermittently fall back on its own sampled policy and
    keep exploring. That jitter is what frees it from a confidently wrong
    agent it latched onto early. When the winner is itself it samples from
    the raw (unfloored) sampled policy, so with no other agents present it
    is exactly the TS agent.
    """

    learns_from_reward = True
    observes_society = True
    has_selection = True

    def __init__(self, index, spec, instance, hyper, society_size):
        super().__init__(index, spec, instance, hyper)
        self.belief = BeliefState(self.n_actions)
        self.counts = [BehaviorCounts(self.n_actions, hyper.ema_step) for _ in range(society_size)]
        self._report = None
        self._behavior = None

    def act(self, trial, streams):
        hp = self.hyper
        if self._behavior is None or trial % hp.fe_stride == 0:
            raw = ts_policy_mc(self.belief, hp.ts_samples, streams.policy)
            ref = regularize(raw, hp.floor)
            est = np.stack([c.estimate(hp.smoothing, hp.floor) for c in self.counts])
            candidates, partitions = candidate_policies(ref, est, hp.tradeoff)
            energies = np.array([free_energy_min(z, hp.tradeoff) for z in partitions])
            winner = select_agent(list(enumerate(energies)), self.index)
            behavior = raw if winner == self.index else candidates[winner]
            self._report = FreeEnergyReport(
                agent_ids=tuple(range(len(self.counts))),
                partitions=partitions,
                energies=energies,
                candidates=candidates,
                selected=winner,
                behavior=behavior,
            )
            self._behavior = behavior
        return self._emit(sample_action(self._behavior, streams.action))

    def observe_reward(self, reward):
        self.belief.update(self.last_local, reward)

    def observe_society(self, observations):
        # Own executed action feeds the self estimate. Observations of others
        # that fall outside the own action set are dropped for that trial;
        # the estimate keeps its last counts.
        self.counts[self.index].observe(self.last_local)
        for agent_index, observed in observations:
            local = restrict_observation(observed, self.lookup)
            if local is not None:
                self.counts[agent_index].observe(local)

    @property
    def report(self):
        return self._report


class TUCBAgent(CountingLearner):
    """Reconstruction: every observed selection counts as an optimistic pseudo-pull.

    Index = (sums + observed) / (pulls + observed) + sqrt(2 * C * log(t) / (pulls + observed)),
    i.e. observed choices behave like pulls that paid reward 1. With no
    observations this collapses to the plain optimistic index.
    """

    observes_society = True

    def __init__(self, *args):
        super().__init__(*args)
        self.observed = np.zeros(self.n_actions, dtype=np.int64)

    def act(self, trial, streams):
        totals = self.pulls + self.observed
        fresh = np.nonzero(totals == 0)[0]
        if fresh.size:
            return self._emit(int(fresh[0]))
        idx = (self.sums + self.observed) / totals + np.sqrt(
            2.0 * self.hyper.tucb_c * math.log(trial + 1) / totals
        )
        return self._emit(int(np.argmax(idx)))

    def observe_society(self, observations):
        for _, observed in observations:
            local = restrict_observation(observed, self.lookup)
            if local is not None:
                self.observed[local] += 1


class OUCBAgent(CountingLearner):
    """Reconstruction: optimism scaled by how popular an arm is among observed agents.

    Index = mean + C * sqrt(2 * log(t) / pulls) * (beta1 + beta2 * popularity * K),
    where popularity is the empirical average observed policy (uniform until
    the first observation arrives).
    """

    observes_society = True

    def __init__(self, *args):
        super().__init__(*args)
        self.observed = np.zeros(self.n_actions, dtype=np.int64)

    def act(self, trial, streams):
        unpulled = np.nonzero(self.pulls == 0)[0]
        if unpulled.size:
            return self._emit(int(unpulled[0]))
        total = int(self.observed.sum())
        popularity = self.observed / total if total else np.full(self.n_actions, 1.0 / self.n_actions)
        scale = self.hyper.oucb_beta1 + self.hyper.oucb_beta2 * popularity * self.n_actions
        idx = self._empirical_means() + self.hyper.oucb_c * np.sqrt(
            2.0 * math.log(trial + 1) / self.pulls
        ) * scale
        return self._emit(int(np.argmax(idx)))

    def observe_society(self, observations):
        for _, observed in observations:
            local = restrict_observation(observed, self.lookup)
            if local is not None:
                self.observed[local] += 1


_BUILDERS = {
    "optimal": OptimalAgent,
    "suboptimal": SubOptimalAgent,
    "random": RandomAgent,
    "opponent": OpponentAgent,
    "p_optimal": POptimalAgent,
    "ts": TSAgent,
    "ucb": UCBAgent,
    "eps_greedy": EpsGreedyAgent,
    "tucb": TUCBAgent,
    "oucb": OUCBAgent,
}


def build_agent(index: int, spec: AgentSpec, config: SocietyConfig) -> Agent:
    if spec.kind == "sblfe":
        return SBLFEAgent(index, spec, config.instance, config.hyper, len(config.agents))
    return _BUILDERS[spec.kind](index, spec, config.instance, config.hyper)


def sbl_fe_step(agent: SBLFEAgent, trial: int, streams: StreamBundle):
    """One decision by the free-energy social learner: (catalog action, report)."""
    action = agent.act(trial, streams)
    return action, agent.report
