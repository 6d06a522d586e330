"""Result emission: delimited tables, a JSON summary, and rendered figures.

CSV output is the canonical record and is byte-stable: fixed column order,
shortest-roundtrip float formatting, newline-terminated rows. Figures are
rendered with matplotlib to SVG files next to the tables; the shaded band
around each regret curve spans two standard deviations either side of the
mean. matplotlib is imported lazily so table-only runs never load it.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .harness import ExperimentResult
from .scenario import HYPER_KEYS


def _fmt(x) -> str:
    """Shortest round-trip decimal form of a float; platform independent."""
    return repr(float(x))


def confidence_band(mean, std, width: float = 2.0):
    """Lower and upper edges of the shaded band: mean -/+ width * std."""
    mean = np.asarray(mean)
    std = np.asarray(std)
    return mean - width * std, mean + width * std


def _write_rows(path: Path, header, rows) -> None:
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_regret_csv(path: Path, results: dict) -> None:
    """Long-format regret table keyed by algorithm (series) name."""
    rows = []
    for label, result in results.items():
        curves = result.curves
        for i, trial in enumerate(curves.trials):
            rows.append(
                (label, str(int(trial)), _fmt(curves.mean_cum_regret[i]), _fmt(curves.std_cum_regret[i]))
            )
    _write_rows(path, ("algorithm", "trial", "mean_cum_regret", "std_cum_regret"), rows)


def write_selection_csv(path: Path, result: ExperimentResult) -> bool:
    """Per-trial agent-selection frequencies; skipped when there is no selection data."""
    curves = result.curves
    if curves.selection_freq is None:
        return False
    rows = []
    for i, trial in enumerate(curves.trials):
        for j, name in enumerate(curves.agent_names):
            rows.append((str(int(trial)), name, _fmt(curves.selection_freq[i, j])))
    _write_rows(path, ("trial", "agent_id", "frequency"), rows)
    return True


def write_free_energy_csv(path: Path, result: ExperimentResult) -> bool:
    curves = result.curves
    if curves.mean_energy is None:
        return False
    rows = []
    for i, trial in enumerate(curves.trials):
        for j, name in enumerate(curves.agent_names):
            rows.append((str(int(trial)), name, _fmt(curves.mean_energy[i, j])))
    _write_rows(path, ("trial", "agent_id", "mean_F"), rows)
    return True


def _config_dict(result: ExperimentResult) -> dict:
    config = result.config
    hyper = config.hyper
    return {
        "environment": {
            "means": list(config.instance.means),
            "noise_p": config.noise,
        },
        "agents": [
            {
                "name": spec.name,
                "kind": spec.kind,
                "subject": spec.subject,
                "action_set": list(spec.action_set),
                **({"p0": spec.p_start, "delta": spec.p_step} if spec.kind == "p_optimal" else {}),
            }
            for spec in config.agents
        ],
        "run": {
            "horizon": config.horizon,
            "runs": config.runs,
            "master_seed": config.master_seed,
            "reconstructed_baselines": config.allow_reconstructed,
            **{key: getattr(hyper, field) for key, field in HYPER_KEYS.items()},
        },
    }


def write_summary_json(path: Path, results: dict) -> None:
    """Final-regret table plus the fully resolved config of every experiment."""
    summary = {
        "final_regret": {
            label: {
                "trial": int(result.curves.trials[-1]),
                "mean": result.curves.final_mean_regret,
                "std": result.curves.final_std_regret,
                "ci95": list(result.curves.ci95()),
                "runs": result.curves.runs,
            }
            for label, result in results.items()
        },
        "config": {label: _config_dict(result) for label, result in results.items()},
    }
    try:
        path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def write_raw_records(directory: Path, result: ExperimentResult) -> None:
    """One CSV per run with the per-trial log of the subject."""
    if result.records is None:
        return
    directory.mkdir(parents=True, exist_ok=True)
    names = result.curves.agent_names
    for record in result.records:
        rows = []
        T = record.subject_rewards.size
        for t in range(T):
            selected = int(record.selected[t])
            rows.append(
                (
                    str(t + 1),
                    str(int(record.actions[t, result.config.subject_index])),
                    str(int(record.subject_rewards[t])),
                    _fmt(record.expected_regret_inc[t]),
                    _fmt(record.pseudo_regret_inc[t]),
                    names[selected] if selected >= 0 else "",
                )
            )
        _write_rows(
            directory / f"run{record.run_index:04d}.csv",
            ("trial", "subject_action", "subject_reward", "expected_regret_inc", "pseudo_regret_inc", "selected"),
            rows,
        )


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------


def _pyplot(seed):
    import matplotlib

    matplotlib.use("Agg", force=False)
    matplotlib.rcParams["svg.hashsalt"] = str(seed)
    import matplotlib.pyplot as plt

    return plt


def render_regret_figure(path: Path, results: dict, seed=0) -> None:
    plt = _pyplot(seed)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, result in results.items():
        curves = result.curves
        low, high = confidence_band(curves.mean_cum_regret, curves.std_cum_regret)
        (line,) = ax.plot(curves.trials, curves.mean_cum_regret, label=label, linewidth=1.4)
        ax.fill_between(curves.trials, low, high, alpha=0.18, color=line.get_color(), linewidth=0)
    ax.set_xlabel("trial")
    ax.set_ylabel("cumulative regret")
    ax.legend(loc="upper left", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _render_per_agent(path: Path, result: ExperimentResult, matrix, ylabel: str, seed=0) -> None:
    plt = _pyplot(seed)
    curves = result.curves
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for j, name in enumerate(curves.agent_names):
        ax.plot(curves.trials, matrix[:, j], label=name, linewidth=1.1)
    ax.set_xlabel("trial")
    ax.set_ylabel(ylabel)
    ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def emit_results(results, out_dir, svg: bool = True, raw_records: bool = False) -> list:
    """Write tables, summary, and figures for one or more experiments.

    `results` maps series label -> ExperimentResult. Selection and
    free-energy outputs are only written for single-experiment emissions
    whose subject produces them. Returns the list of written paths.
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out_dir}: {exc}") from exc
    written = []

    regret_path = out_dir / "regret.csv"
    write_regret_csv(regret_path, results)
    written.append(regret_path)

    summary_path = out_dir / "summary.json"
    write_summary_json(summary_path, results)
    written.append(summary_path)

    single = list(results.values())[0] if len(results) == 1 else None
    if single is not None:
        selection_path = out_dir / "selection.csv"
        if write_selection_csv(selection_path, single):
            written.append(selection_path)
        energy_path = out_dir / "free_energy.csv"
        if write_free_energy_csv(energy_path, single):
            written.append(energy_path)
        if raw_records:
            write_raw_records(out_dir / "raw_records", single)

    if svg:
        seed = list(results.values())[0].config.master_seed
        figure_path = out_dir / "regret.svg"
        render_regret_figure(figure_path, results, seed=seed)
        written.append(figure_path)
        if single is not None and single.curves.selection_freq is not None:
            path = out_dir / "selection.svg"
            _render_per_agent(path, single, single.curves.selection_freq, "selection frequency", seed)
            written.append(path)
        if single is not None and single.curves.mean_energy is not None:
            path = out_dir / "free_energy.svg"
            _render_per_agent(path, single, single.curves.mean_energy, "mean free energy", seed)
            written.append(path)
    return written
