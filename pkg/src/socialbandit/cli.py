"""Command-line interface: run a scenario file, or a named suite of them.

    socialbandit run experiment.scenario --out results --threads 4
    socialbandit suite nonlearners --runs 20 --horizon 500 --out fig3

Every experiment directory receives the delimited tables, summary.json, the
rendered figures (unless --no-svg), and a `resolved.scenario` echo of the
fully resolved configuration so the run can be reproduced exactly. The
environment variable SBL_SEED, when set, overrides the configured master
seed. Exit codes: 0 success, 2 configuration error, 3 numeric failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigurationError, NumericFailureError
from .harness import run_experiment
from .report import emit_results, write_regret_csv, write_summary_json, render_regret_figure
from .scenario import Scenario, parse_scenario, parse_scenario_text, render_scenario, scenario_suite

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socialbandit",
        description="Social bandit learning experiments with a free-energy social learner.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--runs", type=int, default=None, help="override the number of independent runs")
        p.add_argument("--horizon", type=int, default=None, help="override the trial horizon")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--out", type=Path, default=None, help="output directory root")
        p.add_argument("--no-svg", action="store_true", help="skip figure rendering")
        p.add_argument("--raw-records", action="store_true", help="also write per-run trial logs")
        p.add_argument("--threads", type=int, default=1,
                       help="worker processes for run-level parallelism (results are identical)")

    run_p = sub.add_parser("run", help="run one scenario file")
    run_p.add_argument("scenario", type=Path, help="path to the scenario file")
    common(run_p)

    suite_p = sub.add_parser("suite", help="run a built-in scenario suite")
    suite_p.add_argument(
        "name",
        help="suite name: nonlearners, learners, detection, subsets, crowded, two_arm_sweep, noise",
    )
    common(suite_p)
    return parser


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    config = scenario.config
    updates = {}
    if args.runs is not None:
        updates["runs"] = args.runs
    if args.horizon is not None:
        updates["horizon"] = args.horizon
    seed_env = os.environ.get("SBL_SEED")
    if args.seed is not None:
        updates["master_seed"] = args.seed
    elif seed_env is not None:
        try:
            updates["master_seed"] = int(seed_env)
        except ValueError:
            raise ConfigurationError(f"SBL_SEED must be an integer, got {seed_env!r}")
    if updates:
        config = replace(config, **updates)
    scenario.config = config
    if args.no_svg:
        scenario.output.svg = False
    if args.raw_records:
        scenario.output.raw_records = True
    return scenario


def _execute(scenario: Scenario, out_dir: Path, threads: int):
    result = run_experiment(
        scenario.config, workers=threads, keep_records=scenario.output.raw_records
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "resolved.scenario").write_text(render_scenario(scenario))
    subject = scenario.config.agents[scenario.config.subject_index]
    emit_results(
        {subject.kind: result},
        out_dir,
        svg=scenario.output.svg,
        raw_records=scenario.output.raw_records,
    )
    return result


def _cmd_run(args) -> int:
    scenario = _apply_overrides(parse_scenario(args.scenario), args)
    out_dir = args.out if args.out is not None else Path(scenario.output.directory)
    result = _execute(scenario, out_dir, args.threads)
    print(f"wrote {out_dir}: final mean regret {result.curves.final_mean_regret:.4f} "
          f"over {result.curves.runs} runs")
    return EXIT_OK


def _cmd_suite(args) -> int:
    entries = scenario_suite(args.name)
    root = args.out if args.out is not None else Path(args.name)
    results = {}
    for scenario_name, text in entries:
        scenario = _apply_overrides(parse_scenario_text(text, source=scenario_name), args)
        scenario.output.directory = scenario_name
        results[scenario_name] = _execute(scenario, root / scenario_name, args.threads)
        print(f"  {scenario_name}: final mean regret {results[scenario_name].curves.final_mean_regret:.4f}")
    write_regret_csv(root / "regret.csv", results)
    write_summary_json(root / "summary.json", results)
    if not args.no_svg:
        seed = next(iter(results.values())).config.master_seed
        render_regret_figure(root / "regret.svg", results, seed=seed)
    print(f"suite {args.name}: {len(results)} scenarios under {root}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_suite(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailureError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
