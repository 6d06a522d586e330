import json

import pytest

from socialbandit.cli import main
from socialbandit.scenario import parse_scenario, parse_scenario_text

SCENARIO = """
[environment]
preset = delta02

[agent sa]
kind = sblfe

[agent helper]
kind = optimal

[run]
horizon = 80
runs = 2
master_seed = 13
ts_samples = 64

[output]
directory = results
"""


@pytest.fixture()
def scenario_file(tmp_path):
    path = tmp_path / "exp.scenario"
    path.write_text(SCENARIO)
    return path


class TestRunCommand:
    def test_end_to_end(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", str(scenario_file), "--out", str(out), "--no-svg"]) == 0
        for name in ("regret.csv", "summary.json", "selection.csv", "free_energy.csv", "resolved.scenario"):
            assert (out / name).exists()
        assert "final mean regret" in capsys.readouterr().out

    def test_resolved_echo_round_trips(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        main(["run", str(scenario_file), "--out", str(out), "--no-svg"])
        original = parse_scenario_text(SCENARIO)
        echoed = parse_scenario(out / "resolved.scenario")
        assert echoed.config == original.config

    def test_flag_overrides_reach_the_config(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        main(["run", str(scenario_file), "--out", str(out), "--no-svg",
              "--runs", "3", "--horizon", "40", "--seed", "77"])
        summary = json.loads((out / "summary.json").read_text())
        run = summary["config"]["sblfe"]["run"]
        assert run["runs"] == 3 and run["horizon"] == 40 and run["master_seed"] == 77
        assert summary["final_regret"]["sblfe"]["trial"] == 40

    def test_env_seed_override(self, scenario_file, tmp_path, monkeypatch):
        out = tmp_path / "out"
        monkeypatch.setenv("SBL_SEED", "555")
        main(["run", str(scenario_file), "--out", str(out), "--no-svg"])
        summary = json.loads((out / "summary.json").read_text())
        assert summary["config"]["sblfe"]["run"]["master_seed"] == 555

    def test_explicit_seed_beats_env(self, scenario_file, tmp_path, monkeypatch):
        out = tmp_path / "out"
        monkeypatch.setenv("SBL_SEED", "555")
        main(["run", str(scenario_file), "--out", str(out), "--no-svg", "--seed", "6"])
        summary = json.loads((out / "summary.json").read_text())
        assert summary["config"]["sblfe"]["run"]["master_seed"] == 6

    def test_thread_count_is_invisible_in_outputs(self, scenario_file, tmp_path):
        one, two = tmp_path / "one", tmp_path / "two"
        main(["run", str(scenario_file), "--out", str(one), "--no-svg", "--threads", "1"])
        main(["run", str(scenario_file), "--out", str(two), "--no-svg", "--threads", "2"])
        for name in ("regret.csv", "selection.csv", "free_energy.csv", "summary.json", "resolved.scenario"):
            assert (one / name).read_bytes() == (two / name).read_bytes()

    def test_raw_records_flag(self, scenario_file, tmp_path):
        out = tmp_path / "out"
        main(["run", str(scenario_file), "--out", str(out), "--no-svg", "--raw-records"])
        assert len(list((out / "raw_records").glob("run*.csv"))) == 2


class TestExitCodes:
    def test_configuration_error_is_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.scenario"
        bad.write_text(SCENARIO + "\n[run]\nc = 1.5\n")
        assert main(["run", str(bad), "--out", str(tmp_path / "o"), "--no-svg"]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_missing_scenario_is_2(self, tmp_path):
        assert main(["run", str(tmp_path / "none.scenario")]) == 2

    def test_unknown_suite_is_2(self, tmp_path):
        assert main(["suite", "fig99", "--out", str(tmp_path)]) == 2

    def test_unwritable_output_is_4(self, scenario_file, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        rc = main(["run", str(scenario_file), "--out", str(blocker / "sub"), "--no-svg"])
        assert rc == 4
        assert "i/o error" in capsys.readouterr().err


class TestSuiteCommand:
    def test_detection_suite_at_toy_scale(self, tmp_path, capsys):
        out = tmp_path / "detection"
        rc = main(["suite", "detection", "--out", str(out), "--no-svg",
                   "--runs", "2", "--horizon", "30", "--threads", "2"])
        assert rc == 0
        subdirs = sorted(p.name for p in out.iterdir() if p.is_dir())
        assert subdirs == ["detection_drifting", "detection_mixed", "detection_ranked"]
        assert (out / "regret.csv").exists()
        assert (out / "summary.json").exists()
        for sub in subdirs:
            assert (out / sub / "regret.csv").exists()
            assert (out / sub / "resolved.scenario").exists()
        assert "3 scenarios" in capsys.readouterr().out
