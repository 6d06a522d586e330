"""Trial loop, run loop, and cross-run aggregation.

Within a trial every agent acts simultaneously from its pre-trial state,
then rewards land, then the subject sees the other agents' actions through
the noise channel. No agent ever sees a same-trial action before acting.
Runs are the unit of parallelism; each run derives all its random streams
from (master_seed, run index), so results are identical for any worker
count and any execution order.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .agents import build_agent
from .config import AgentSpec, Hyperparameters, SocietyConfig
from .envs import BanditInstance, noisy_observation, pull
from .streams import agent_streams


class TrialRecord(NamedTuple):
    trial: int
    actions: tuple
    subject_action: int
    subject_reward: int
    expected_regret_inc: float
    pseudo_regret_inc: float
    selected: int  # -1 when the subject has no selection step
    energies: object  # ndarray of per-agent free energies, or None
    behavior_optimal_mass: float


class SocietyState:
    """Mutable state of one run: environment, agents, and their streams."""

    def __init__(self, config: SocietyConfig, run_index: int):
        self.config = config
        self.instance = config.instance
        self.agents = [build_agent(i, spec, config) for i, spec in config.iter_agents()]
        self.streams = [agent_streams(config.master_seed, run_index, i) for i in range(len(self.agents))]
        self.subject_index = config.subject_index
        self.subject = self.agents[self.subject_index]
        self._optimal_mean = self.instance.optimal_mean
        self._optimal_local = int(self.subject.lookup[self.instance.optimal_index])

    def run_trial(self, t: int) -> TrialRecord:
        config = self.config
        agents = self.agents
        actions = tuple(agent.act(t, self.streams[i]) for i, agent in enumerate(agents))

        subject_reward = 0
        for i, agent in enumerate(agents):
            if agent.learns_from_reward:
                reward = pull(self.instance, actions[i], self.streams[i].reward)
                agent.observe_reward(reward)
                if i == self.subject_index:
                    subject_reward = reward

        if self.subject.observes_society:
            observed = []
            for j in range(len(agents)):
                if j == self.subject_index:
                    continue
                seen = noisy_observation(
                    actions[j], config.noise, self.instance.n_arms, self.streams[j].noise
                )
                observed.append((j, seen))
            self.subject.observe_society(observed)

        subject_action = actions[self.subject_index]
        report = self.subject.report
        if report is not None:
            selected = report.selected
            energies = report.energies
            mass = float(report.behavior[self._optimal_local]) if self._optimal_local >= 0 else 0.0
        else:
            selected, energies, mass = -1, None, np.nan
        return TrialRecord(
            trial=t,
            actions=actions,
            subject_action=subject_action,
            subject_reward=subject_reward,
            expected_regret_inc=self._optimal_mean - self.instance.means[subject_action],
            pseudo_regret_inc=self._optimal_mean - subject_reward,
            selected=selected,
            energies=energies,
            behavior_optimal_mass=mass,
        )


@dataclass
class RunRecord:
    """Per-trial log of one independent run."""

    run_index: int
    actions: np.ndarray  # (T, N) catalog indices
    subject_rewards: np.ndarray  # (T,)
    expected_regret_inc: np.ndarray  # (T,)
    pseudo_regret_inc: np.ndarray  # (T,)
    selected: np.ndarray  # (T,) agent index, -1 when not applicable
    energies: np.ndarray  # (T, N) free energies, or empty when not applicable
    behavior_optimal_mass: np.ndarray  # (T,) nan when not applicable

    @property
    def has_selection(self) -> bool:
        return bool(np.any(self.selected >= 0))


def run_single(config: SocietyConfig, run_index: int) -> RunRecord:
    """Execute one seeded run to the horizon."""
    state = SocietyState(config, run_index)
    T, N = config.horizon, len(config.agents)
    track_fe = state.subject.has_selection
    actions = np.empty((T, N), dtype=np.int16)
    rewards = np.empty(T, dtype=np.int8)
    expected = np.empty(T)
    pseudo = np.empty(T)
    selected = np.full(T, -1, dtype=np.int16)
    energies = np.empty((T, N)) if track_fe else np.empty((0, N))
    mass = np.full(T, np.nan)
    for t in range(T):
        rec = state.run_trial(t)
        actions[t] = rec.actions
        rewards[t] = rec.subject_reward
        expected[t] = rec.expected_regret_inc
        pseudo[t] = rec.pseudo_regret_inc
        selected[t] = rec.selected
        if track_fe:
            energies[t] = rec.energies
            mass[t] = rec.behavior_optimal_mass
    return RunRecord(run_index, actions, rewards, expected, pseudo, selected, energies, mass)


def regret_curves(record: RunRecord):
    """Cumulative expected regret and cumulative realized pseudo-regret.

    The expected curve accumulates the per-trial mean shortfall of the
    played arm; the pseudo curve accumulates shortfall against realized
    rewards and is a random variable that can dip negative locally.
    """
    return np.cumsum(record.expected_regret_inc), np.cumsum(record.pseudo_regret_inc)


@dataclass
class AggregateCurves:
    """Cross-run means and spreads, one row per trial (1-based trial axis)."""

    trials: np.ndarray
    mean_cum_regret: np.ndarray
    std_cum_regret: np.ndarray
    mean_cum_pseudo_regret: np.ndarray
    std_cum_pseudo_regret: np.ndarray
    selection_freq: object  # (T, N) run fraction selecting each agent, or None
    mean_energy: object  # (T, N) mean free energy per agent, or None
    agent_names: tuple
    runs: int

    @property
    def final_mean_regret(self) -> float:
        return float(self.mean_cum_regret[-1])

    @property
    def final_std_regret(self) -> float:
        return float(self.std_cum_regret[-1])

    def ci95(self, at: int = -1):
        """95% confidence interval for the mean cumulative regret at one trial."""
        half = 1.96 * self.std_cum_regret[at] / np.sqrt(self.runs)
        center = self.mean_cum_regret[at]
        return float(center - half), float(center + half)


@dataclass
class ExperimentResult:
    config: SocietyConfig
    curves: AggregateCurves
    records: object = None  # list[RunRecord] when kept


def aggregate(config: SocietyConfig, records) -> AggregateCurves:
    expected = np.vstack([np.cumsum(r.expected_regret_inc) for r in records])
    pseudo = np.vstack([np.cumsum(r.pseudo_regret_inc) for r in records])
    R = len(records)
    ddof = 1 if R > 1 else 0
    selection = None
    energy = None
    if records[0].has_selection:
        N = len(config.agents)
        picks = np.stack([r.selected for r in records])  # (R, T)
        selection = np.stack([(picks == i).mean(axis=0) for i in range(N)], axis=1)
        energy = np.mean(np.stack([r.energies for r in records]), axis=0)
    return AggregateCurves(
        trials=np.arange(1, config.horizon + 1),
        mean_cum_regret=expected.mean(axis=0),
        std_cum_regret=expected.std(axis=0, ddof=ddof),
        mean_cum_pseudo_regret=pseudo.mean(axis=0),
        std_cum_pseudo_regret=pseudo.std(axis=0, ddof=ddof),
        selection_freq=selection,
        mean_energy=energy,
        agent_names=config.agent_names,
        runs=R,
    )


def _run_task(payload):
    config, run_index = payload
    return run_single(config, run_index)


def run_experiment(config: SocietyConfig, workers: int = 1, keep_records: bool = False) -> ExperimentResult:
    """Execute all runs and aggregate; identical output for any worker count."""
    indices = range(config.runs)
    if workers <= 1 or config.runs == 1:
        records = [run_single(config, i) for i in indices]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, config.runs)) as pool:
            records = list(pool.map(_run_task, [(config, i) for i in indices]))
    curves = aggregate(config, records)
    return ExperimentResult(config, curves, records if keep_records else None)


def complexity_probe(agent_counts, arm_counts, trials: int = 150, warmup: int = 30,
                     hyper: Hyperparameters | None = None, seed: int = 0):
    """Mean per-trial wall time of the social learner across society sizes.

    Societies hold one free-energy subject plus random filler agents; the
    posterior-sampling budget stays fixed so only the society terms scale.
    Returns rows of (n_agents, n_arms, seconds_per_trial).
    """
    hyper = hyper or Hyperparameters(ts_samples=512)
    rows = []
    for n_arms in arm_counts:
        means = tuple(np.linspace(0.1, 0.9, n_arms))
        for n_agents in agent_counts:
            specs = [AgentSpec(kind="sblfe", subject=True)]
            specs += [AgentSpec(kind="random") for _ in range(n_agents - 1)]
            config = SocietyConfig(
                instance=BanditInstance(means),
                agents=tuple(specs),
                horizon=warmup + trials,
                runs=1,
                master_seed=seed,
                hyper=hyper,
            )
            state = SocietyState(config, 0)
            for t in range(warmup):
                state.run_trial(t)
            start = time.perf_counter()
            for t in range(warmup, warmup + trials):
                state.run_trial(t)
            rows.append((n_agents, n_arms, (time.perf_counter() - start) / trials))
    return rows
