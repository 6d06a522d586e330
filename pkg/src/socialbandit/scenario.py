"""Scenario files: a line-oriented `key = value` format with named sections.

A scenario fully describes one experiment. Sections:

    [environment]   preset or explicit means, observation noise
    [agent <name>]  one section per agent; exactly one is the subject
    [run]           horizon, runs, master seed, hyperparameters
    [output]        directory and emission switches

Unknown sections or keys are rejected with the offending line number, and
every parsed scenario can be written back out in canonical form such that
re-parsing yields an identical configuration.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from .config import AgentSpec, Hyperparameters, SocietyConfig
from .envs import BanditInstance, preset_instance, two_arm_instance, PRESET_MEANS
from .errors import ConfigurationError

DEFAULT_SEED = 20250801
DEFAULT_HORIZON = 2000
DEFAULT_RUNS = 100

# Scenario key -> Hyperparameters field. The short names are the public
# file-format contract; the field names are the descriptive internal ones.
HYPER_KEYS = {
    "c": "tradeoff",
    "lambda": "ema_step",
    "smoothing_w": "smoothing",
    "xi": "floor",
    "ts_samples": "ts_samples",
    "fe_stride": "fe_stride",
    "ucb_C": "ucb_c",
    "tucb_C": "tucb_c",
    "oucb_C": "oucb_c",
    "oucb_beta1": "oucb_beta1",
    "oucb_beta2": "oucb_beta2",
    "eps0": "eps0",
    "decay": "eps_decay",
}
_INT_HYPERS = {"ts_samples", "fe_stride"}

RUN_KEYS = {"horizon", "runs", "master_seed", "reconstructed_baselines"} | set(HYPER_KEYS)
ENV_KEYS = {"preset", "means", "noise_p"}
AGENT_KEYS = {"kind", "subject", "action_set", "p0", "delta"}
OUTPUT_KEYS = {"directory", "svg", "raw_records"}


class OutputSpec:
    def __init__(self, directory: str = ".", svg: bool = True, raw_records: bool = False):
        self.directory = directory
        self.svg = svg
        self.raw_records = raw_records

    def __eq__(self, other):
        return (
            isinstance(other, OutputSpec)
            and (self.directory, self.svg, self.raw_records)
            == (other.directory, other.svg, other.raw_records)
        )


class Scenario:
    """A parsed scenario: the society configuration plus output settings."""

    def __init__(self, config: SocietyConfig, output: OutputSpec, source: str = ""):
        self.config = config
        self.output = output
        self.source = source


def _fail(line_no: int, message: str):
    raise ConfigurationError(f"line {line_no}: {message}")


def _parse_bool(raw: str, line_no: int, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in {"true", "yes", "1"}:
        return True
    if lowered in {"false", "no", "0"}:
        return False
    _fail(line_no, f"key '{key}' expects true/false, got {raw!r}")


def _parse_float(raw: str, line_no: int, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        _fail(line_no, f"key '{key}' expects a number, got {raw!r}")


def _parse_int(raw: str, line_no: int, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        _fail(line_no, f"key '{key}' expects an integer, got {raw!r}")


def _split_sections(text: str):
    """Yield (section_header, line_no, [(line_no, key, value), ...]) groups."""
    sections = []
    current = None
    for line_no, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = (line[1:-1].strip(), line_no, [])
            sections.append(current)
            continue
        if "=" not in line:
            _fail(line_no, f"expected 'key = value', got {rawline.strip()!r}")
        if current is None:
            _fail(line_no, "key outside any [section]")
        key, value = line.split("=", 1)
        current[2].append((line_no, key.strip(), value.strip()))
    return sections


def parse_scenario_text(text: str, source: str = "<string>") -> Scenario:
    env_entries = None
    run_entries = []
    output_entries = []
    agent_sections = []

    for header, line_no, entries in _split_sections(text):
        parts = header.split(None, 1)
        name = parts[0].lower()
        if name == "environment":
            if env_entries is not None:
                _fail(line_no, "duplicate [environment] section")
            env_entries = entries
        elif name == "run":
            run_entries.extend(entries)
        elif name == "output":
            output_entries.extend(entries)
        elif name == "agent":
            if len(parts) != 2:
                _fail(line_no, "agent section needs a name: [agent <name>]")
            agent_sections.append((parts[1].strip(), line_no, entries))
        else:
            _fail(line_no, f"unknown section [{header}]")

    if env_entries is None:
        raise ConfigurationError("missing required [environment] section")
    if not agent_sections:
        raise ConfigurationError("at least one [agent <name>] section is required")

    # Environment
    preset = None
    means = None
    noise = 0.0
    for line_no, key, value in env_entries:
        if key == "preset":
            preset = value
        elif key == "means":
            try:
                means = tuple(float(v) for v in value.split(","))
            except ValueError:
                _fail(line_no, f"key 'means' expects comma-separated numbers, got {value!r}")
        elif key == "noise_p":
            noise = _parse_float(value, line_no, key)
            if not 0.0 <= noise <= 1.0:
                _fail(line_no, f"noise_p must be in [0, 1], got {noise}")
        else:
            _fail(line_no, f"unknown key '{key}' in [environment]; allowed: {sorted(ENV_KEYS)}")
    if (preset is None) == (means is None):
        raise ConfigurationError("[environment] needs exactly one of 'preset' or 'means'")
    if preset is not None:
        if preset not in PRESET_MEANS:
            raise ConfigurationError(
                f"unknown preset {preset!r}; choose from {sorted(PRESET_MEANS)}"
            )
        instance = preset_instance(preset)
    else:
        instance = BanditInstance(means)

    # Agents
    specs = []
    subject_declared = False
    for agent_name, section_line, entries in agent_sections:
        kind = None
        subject = False
        action_set = ()
        p_start, p_step = 1.0, 0.0
        for line_no, key, value in entries:
            if key == "kind":
                kind = value.strip().lower()
            elif key == "subject":
                subject = _parse_bool(value, line_no, key)
            elif key == "action_set":
                try:
                    action_set = tuple(int(v) for v in value.split(","))
                except ValueError:
                    _fail(line_no, f"key 'action_set' expects comma-separated integers, got {value!r}")
            elif key == "p0":
                p_start = _parse_float(value, line_no, key)
            elif key == "delta":
                p_step = _parse_float(value, line_no, key)
            else:
                _fail(line_no, f"unknown key '{key}' in [agent {agent_name}]; allowed: {sorted(AGENT_KEYS)}")
        if kind is None:
            _fail(section_line, f"agent {agent_name!r} is missing required key 'kind'")
        subject_declared = subject_declared or subject
        try:
            specs.append(
                AgentSpec(
                    kind=kind,
                    name=agent_name,
                    action_set=action_set,
                    subject=subject,
                    p_start=p_start,
                    p_step=p_step,
                )
            )
        except ConfigurationError as exc:
            raise ConfigurationError(f"[agent {agent_name}] near line {section_line}: {exc}") from exc

    if not subject_declared:
        from .config import SOCIAL_KINDS, SUBJECT_KINDS

        social = [i for i, s in enumerate(specs) if s.kind in SOCIAL_KINDS]
        learners = [i for i, s in enumerate(specs) if s.kind in SUBJECT_KINDS]
        if len(social) == 1:
            inferred = social[0]
        elif len(learners) == 1:
            inferred = learners[0]
        else:
            raise ConfigurationError(
                "no agent has 'subject = true' and the subject cannot be inferred; "
                "mark exactly one learner as the subject"
            )
        specs[inferred] = replace(specs[inferred], subject=True)

    # Run block
    horizon = DEFAULT_HORIZON
    runs = DEFAULT_RUNS
    master_seed = DEFAULT_SEED
    allow_reconstructed = False
    hyper_values = {}
    for line_no, key, value in run_entries:
        if key == "horizon":
            horizon = _parse_int(value, line_no, key)
        elif key == "runs":
            runs = _parse_int(value, line_no, key)
        elif key == "master_seed":
            master_seed = _parse_int(value, line_no, key)
        elif key == "reconstructed_baselines":
            allow_reconstructed = _parse_bool(value, line_no, key)
        elif key in HYPER_KEYS:
            field = HYPER_KEYS[key]
            if field in _INT_HYPERS:
                hyper_values[field] = _parse_int(value, line_no, key)
            else:
                hyper_values[field] = _parse_float(value, line_no, key)
            if key == "c" and not 0.0 < hyper_values[field] < 1.0:
                _fail(
                    line_no,
                    f"key 'c' must lie strictly between 0 and 1 (convergence requirement), "
                    f"got {hyper_values[field]}",
                )
        else:
            _fail(line_no, f"unknown key '{key}' in [run]; allowed: {sorted(RUN_KEYS)}")

    # Output block
    output = OutputSpec()
    for line_no, key, value in output_entries:
        if key == "directory":
            output.directory = value
        elif key == "svg":
            output.svg = _parse_bool(value, line_no, key)
        elif key == "raw_records":
            output.raw_records = _parse_bool(value, line_no, key)
        else:
            _fail(line_no, f"unknown key '{key}' in [output]; allowed: {sorted(OUTPUT_KEYS)}")

    try:
        config = SocietyConfig(
            instance=instance,
            agents=tuple(specs),
            horizon=horizon,
            runs=runs,
            noise=noise,
            master_seed=master_seed,
            hyper=Hyperparameters(**hyper_values),
            allow_reconstructed=allow_reconstructed,
        )
    except (ConfigurationError, ValueError) as exc:
        raise ConfigurationError(str(exc)) from exc
    return Scenario(config, output, source=source)


def parse_scenario(path) -> Scenario:
    """Parse a scenario file into a fully resolved configuration."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario_text(text, source=str(path))


def render_scenario(scenario: Scenario) -> str:
    """Canonical text for a scenario; parsing it yields an identical config."""
    config = scenario.config
    hyper = config.hyper
    lines = ["[environment]"]
    preset = next((k for k, v in PRESET_MEANS.items() if v == config.instance.means), None)
    if preset is not None:
        lines.append(f"preset = {preset}")
    else:
        lines.append("means = " + ", ".join(repr(m) for m in config.instance.means))
    lines.append(f"noise_p = {config.noise!r}")
    for spec in config.agents:
        lines += ["", f"[agent {spec.name}]", f"kind = {spec.kind}"]
        if spec.subject:
            lines.append("subject = true")
        if spec.action_set:
            lines.append("action_set = " + ", ".join(str(a) for a in spec.action_set))
        if spec.kind == "p_optimal":
            lines.append(f"p0 = {spec.p_start!r}")
            lines.append(f"delta = {spec.p_step!r}")
    lines += [
        "",
        "[run]",
        f"horizon = {config.horizon}",
        f"runs = {config.runs}",
        f"master_seed = {config.master_seed}",
    ]
    if config.allow_reconstructed:
        lines.append("reconstructed_baselines = true")
    for key in HYPER_KEYS:
        value = getattr(hyper, HYPER_KEYS[key])
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    lines += [
        "",
        "[output]",
        f"directory = {scenario.output.directory}",
        f"svg = {'true' if scenario.output.svg else 'false'}",
        f"raw_records = {'true' if scenario.output.raw_records else 'false'}",
        "",
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Built-in suites
# ---------------------------------------------------------------------------

SUBJECTS = ("sblfe", "tucb", "oucb", "ts", "ucb")
_SOCIAL = {"sblfe", "tucb", "oucb"}


def _agent_lines(name: str, kind: str, subject=False, action_set=None, p0=None, delta=None):
    lines = [f"[agent {name}]", f"kind = {kind}"]
    if subject:
        lines.append("subject = true")
    if action_set:
        lines.append("action_set = " + ", ".join(str(a) for a in action_set))
    if p0 is not None:
        lines.append(f"p0 = {p0!r}")
    if delta is not None:
        lines.append(f"delta = {delta!r}")
    return lines


def _scenario_text(name, env_lines, agent_blocks, horizon, runs, extra_run=(), seed=DEFAULT_SEED):
    lines = [f"# scenario: {name}", "[environment]", *env_lines, ""]
    for block in agent_blocks:
        lines += block + [""]
    lines += ["[run]", f"horizon = {horizon}", f"runs = {runs}", f"master_seed = {seed}"]
    lines += list(extra_run)
    lines += ["", "[output]", f"directory = {name}", ""]
    return "\n".join(lines)


def _needs_reconstructed(subject):
    return ["reconstructed_baselines = true"] if subject in _SOCIAL - {"sblfe"} else []


def scenario_suite(name: str, runs: int = DEFAULT_RUNS, seed: int = DEFAULT_SEED):
    """Named experiment suites; each returns [(scenario_name, scenario_text), ...].

    Suites: nonlearners, learners, detection, subsets, crowded, two_arm_sweep,
    noise. Every suite pairs one subject-under-test per scenario with a fixed
    society, at horizon/run counts sized for a desk-scale reproduction.
    """
    env10 = ["preset = delta02"]
    suites = {}

    def nonlearners():
        out = []
        for ia in ("optimal", "suboptimal", "random", "opponent"):
            for subject in SUBJECTS:
                scen = f"nonlearners_{ia}_{subject}"
                blocks = [_agent_lines("subject", subject, subject=True), _agent_lines("ia", ia)]
                out.append((scen, _scenario_text(scen, env10, blocks, 2000, runs,
                                                 _needs_reconstructed(subject), seed)))
        return out

    def learners():
        out = []
        for ia in ("ts", "eps_greedy", "ucb"):
            for subject in SUBJECTS:
                scen = f"learners_{ia}_{subject}"
                blocks = [_agent_lines("subject", subject, subject=True), _agent_lines("ia", ia)]
                out.append((scen, _scenario_text(scen, env10, blocks, 2000, runs,
                                                 _needs_reconstructed(subject), seed)))
        return out

    def detection():
        societies = {
            "mixed": [("opponent", {}), ("random", {}), ("eps", {"kind": "eps_greedy"})],
            "ranked": [("optimal", {}), ("suboptimal", {}), ("eps", {"kind": "eps_greedy"})],
            "drifting": [
                ("falling", {"kind": "p_optimal", "p0": 1.0, "delta": -0.001}),
                ("rising", {"kind": "p_optimal", "p0": 0.0, "delta": 0.001}),
            ],
        }
        out = []
        for label, members in societies.items():
            scen = f"detection_{label}"
            blocks = [_agent_lines("subject", "sblfe", subject=True)]
            for agent_name, params in members:
                blocks.append(
                    _agent_lines(
                        agent_name,
                        params.get("kind", agent_name),
                        p0=params.get("p0"),
                        delta=params.get("delta"),
                    )
                )
            out.append((scen, _scenario_text(scen, env10, blocks, 2000, runs, (), seed)))
        return out

    def subsets():
        # Three disjoint 3-action learners; one set contains the subject's optimum.
        sets = [(7, 8, 9), (0, 1, 2), (3, 4, 5)]
        out = []
        for subject in SUBJECTS:
            scen = f"subsets_{subject}"
            blocks = [_agent_lines("subject", subject, subject=True)]
            for i, actions in enumerate(sets):
                blocks.append(_agent_lines(f"eps{i}", "eps_greedy", action_set=actions))
            out.append((scen, _scenario_text(scen, env10, blocks, 2000, runs,
                                             _needs_reconstructed(subject), seed)))
        return out

    def crowded():
        societies = {
            "optimal": [("optimal", "optimal")],
            "eps": [("eps", "eps_greedy")],
            "optimal_eps": [("optimal", "optimal"), ("eps0", "eps_greedy"), ("eps1", "eps_greedy")],
        }
        out = []
        for label, extras in societies.items():
            filler = [(f"opp{i}", "opponent") for i in range(3)]
            if label != "optimal_eps":
                filler += [(f"rand{i}", "random") for i in range(2)]
            for subject in SUBJECTS:
                scen = f"crowded_{label}_{subject}"
                blocks = [_agent_lines("subject", subject, subject=True)]
                blocks += [_agent_lines(n, k) for n, k in extras + filler]
                out.append((scen, _scenario_text(scen, env10, blocks, 2000, runs,
                                                 _needs_reconstructed(subject), seed)))
        return out

    def two_arm_sweep():
        out = []
        gaps = [round(0.05 * i, 2) for i in range(11)]
        for ia in ("optimal", "random", "opponent", "eps_greedy"):
            for horizon in (200, 10000):
                for gap in gaps:
                    for subject in SUBJECTS:
                        scen = f"two_arm_{ia}_T{horizon}_gap{gap:0.2f}_{subject}"
                        env = ["means = " + ", ".join(repr(m) for m in two_arm_instance(gap).means)]
                        blocks = [_agent_lines("subject", subject, subject=True),
                                  _agent_lines("ia", ia)]
                        out.append((scen, _scenario_text(scen, env, blocks, horizon, runs,
                                                         _needs_reconstructed(subject), seed)))
        return out

    def noise():
        out = []
        for ia in ("optimal", "eps_greedy", "opponent", "suboptimal"):
            for level in (0.1, 0.2):
                for subject in SUBJECTS:
                    scen = f"noise_{ia}_p{level}_{subject}"
                    env = ["preset = delta02", f"noise_p = {level!r}"]
                    blocks = [_agent_lines("subject", subject, subject=True),
                              _agent_lines("ia", ia)]
                    out.append((scen, _scenario_text(scen, env, blocks, 2000, runs,
                                                     _needs_reconstructed(subject), seed)))
        return out

    suites = {
        "nonlearners": nonlearners,
        "learners": learners,
        "detection": detection,
        "subsets": subsets,
        "crowded": crowded,
        "two_arm_sweep": two_arm_sweep,
        "noise": noise,
    }
    if name not in suites:
        raise ConfigurationError(f"unknown suite {name!r}; choose from {sorted(suites)}")
    return suites[name]()
