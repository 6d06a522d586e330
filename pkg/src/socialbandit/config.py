"""Configuration records shared by the agent zoo, harness, and CLI."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .envs import BanditInstance
from .errors import ConfigurationError, ParameterError
from .free_energy import check_tradeoff

# Agent kinds, grouped by what they do with feedback.
NON_LEARNER_KINDS = ("optimal", "suboptimal", "random", "opponent", "p_optimal")
INDIVIDUAL_LEARNER_KINDS = ("ts", "ucb", "eps_greedy")
SOCIAL_KINDS = ("sblfe", "tucb", "oucb")
RECONSTRUCTED_KINDS = ("tucb", "oucb")
ALL_KINDS = NON_LEARNER_KINDS + INDIVIDUAL_LEARNER_KINDS + SOCIAL_KINDS
SUBJECT_KINDS = INDIVIDUAL_LEARNER_KINDS + SOCIAL_KINDS


@dataclass(frozen=True)
class Hyperparameters:
    """Tuning constants for every agent kind; defaults follow the tuned values.

    Scenario-file keys in parentheses where they differ from the field name:
    tradeoff (c), ema_step (lambda), smoothing (smoothing_w), floor (xi).
    """

    tradeoff: float = 0.5
    ema_step: float = 0.1
    smoothing: float = 0.15
    floor: float = 1e-6
    ts_samples: int = 2048
    fe_stride: int = 1
    ucb_c: float = 0.5
    tucb_c: float = 2.0
    oucb_c: float = 2.0
    oucb_beta1: float = 0.5
    oucb_beta2: float = 0.5
    eps0: float = 0.9
    eps_decay: float = 0.999

    def validate(self) -> "Hyperparameters":
        check_tradeoff(self.tradeoff)
        if not 0.0 <= self.ema_step <= 1.0:
            raise ParameterError(f"ema_step must be in [0, 1], got {self.ema_step}")
        if not 0.0 <= self.smoothing <= 1.0:
            raise ParameterError(f"smoothing must be in [0, 1], got {self.smoothing}")
        if not self.floor > 0.0:
            raise ParameterError(f"floor must be > 0, got {self.floor}")
        if self.ts_samples < 1:
            raise ParameterError(f"ts_samples must be >= 1, got {self.ts_samples}")
        if self.fe_stride < 1:
            raise ParameterError(f"fe_stride must be >= 1, got {self.fe_stride}")
        if not 0.0 <= self.eps0 <= 1.0:
            raise ParameterError(f"eps0 must be in [0, 1], got {self.eps0}")
        if not 0.0 < self.eps_decay <= 1.0:
            raise ParameterError(f"eps_decay must be in (0, 1], got {self.eps_decay}")
        return self


@dataclass(frozen=True)
class AgentSpec:
    """One agent in a society: kind, optional action subset, kind parameters."""

    kind: str
    name: str = ""
    action_set: tuple = ()  # empty means the full catalog
    subject: bool = False
    p_start: float = 1.0  # p_optimal only
    p_step: float = 0.0  # p_optimal only: per-trial drift, clamped into [0, 1]

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise ConfigurationError(f"unknown agent kind {self.kind!r}; choose from {ALL_KINDS}")
        if self.kind == "p_optimal" and not 0.0 <= self.p_start <= 1.0:
            raise ConfigurationError(f"p_optimal start probability must be in [0, 1], got {self.p_start}")


@dataclass(frozen=True)
class SocietyConfig:
    """A complete experiment: environment, agents, horizon, runs, seeding."""

    instance: BanditInstance
    agents: tuple
    horizon: int
    runs: int
    noise: float = 0.0
    master_seed: int = 0
    hyper: Hyperparameters = field(default_factory=Hyperparameters)
    allow_reconstructed: bool = False

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigurationError(f"horizon must be >= 1, got {self.horizon}")
        if self.runs < 1:
            raise ConfigurationError(f"runs must be >= 1, got {self.runs}")
        if not 0.0 <= self.noise <= 1.0:
            raise ConfigurationError(f"observation noise must be in [0, 1], got {self.noise}")
        agents = tuple(self.agents)
        named = []
        for i, spec in enumerate(agents):
            named.append(replace(spec, name=spec.name or f"{spec.kind}{i}"))
        names = [s.name for s in named]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate agent names: {names}")
        object.__setattr__(self, "agents", tuple(named))
        subjects = [i for i, s in self.iter_agents() if s.subject]
        if len(subjects) != 1:
            raise ConfigurationError(f"exactly one agent must be the subject, found {len(subjects)}")
        subject = self.agents[subjects[0]]
        if subject.kind not in SUBJECT_KINDS:
            raise ConfigurationError(f"subject must be a learner, got kind {subject.kind!r}")
        for i, spec in self.iter_agents():
            if spec.kind in RECONSTRUCTED_KINDS and not self.allow_reconstructed:
                raise ConfigurationError(
                    f"agent {spec.name!r}: kind {spec.kind!r} is a documented reconstruction of an "
                    "externally defined baseline; set reconstructed_baselines = true to enable it"
                )
            for a in spec.action_set:
                if not 0 <= a < self.instance.n_arms:
                    raise ConfigurationError(
                        f"agent {spec.name!r}: action {a} outside catalog of {self.instance.n_arms}"
                    )
            if spec.action_set and len(set(spec.action_set)) != len(spec.action_set):
                raise ConfigurationError(f"agent {spec.name!r}: duplicate actions in action set")
        self.hyper.validate()

    def iter_agents(self):
        return enumerate(self.agents)

    @property
    def subject_index(self) -> int:
        return next(i for i, s in self.iter_agents() if s.subject)

    @property
    def agent_names(self) -> tuple:
        return tuple(s.name for s in self.agents)
