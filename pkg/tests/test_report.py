import json

import numpy as np
import pytest

from socialbandit.config import AgentSpec, Hyperparameters, SocietyConfig
from socialbandit.envs import preset_instance
from socialbandit.harness import run_experiment
from socialbandit.report import confidence_band, emit_results

FAST = Hyperparameters(ts_samples=64)


@pytest.fixture(scope="module")
def social_result():
    config = SocietyConfig(
        instance=preset_instance("delta02"),
        agents=(AgentSpec(kind="sblfe", subject=True), AgentSpec(kind="optimal")),
        horizon=60, runs=3, master_seed=21, hyper=FAST,
    )
    return run_experiment(config, keep_records=True)


@pytest.fixture(scope="module")
def ts_result():
    config = SocietyConfig(
        instance=preset_instance("delta02"),
        agents=(AgentSpec(kind="ts", subject=True),),
        horizon=60, runs=3, master_seed=21, hyper=FAST,
    )
    return run_experiment(config)


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestBand:
    def test_halfwidth_is_twice_std(self):
        mean = np.array([1.0, 2.0])
        std = np.array([0.25, 0.5])
        low, high = confidence_band(mean, std)
        assert np.allclose(high - mean, 2 * std)
        assert np.allclose(mean - low, 2 * std)


class TestTables:
    def test_full_emission_for_social_subject(self, social_result, tmp_path):
        emit_results({"sblfe": social_result}, tmp_path, svg=False)
        header, rows = read_csv(tmp_path / "regret.csv")
        assert header == ["algorithm", "trial", "mean_cum_regret", "std_cum_regret"]
        assert len(rows) == 60
        assert rows[0][0] == "sblfe" and rows[0][1] == "1"
        # every float round-trips exactly
        assert float(rows[-1][2]) == social_result.curves.mean_cum_regret[-1]

        header, rows = read_csv(tmp_path / "selection.csv")
        assert header == ["trial", "agent_id", "frequency"]
        by_trial = {}
        for trial, _, freq in rows:
            by_trial.setdefault(trial, 0.0)
            by_trial[trial] += float(freq)
        assert all(abs(total - 1.0) < 1e-9 for total in by_trial.values())

        header, rows = read_csv(tmp_path / "free_energy.csv")
        assert header == ["trial", "agent_id", "mean_F"]
        assert len(rows) == 60 * 2

    def test_selection_omitted_for_plain_learner(self, ts_result, tmp_path):
        emit_results({"ts": ts_result}, tmp_path, svg=False)
        assert not (tmp_path / "selection.csv").exists()
        assert not (tmp_path / "free_energy.csv").exists()
        assert (tmp_path / "regret.csv").exists()

    def test_two_algorithms_share_regret_table(self, social_result, ts_result, tmp_path):
        emit_results({"sblfe": social_result, "ts": ts_result}, tmp_path, svg=False)
        _, rows = read_csv(tmp_path / "regret.csv")
        assert {row[0] for row in rows} == {"sblfe", "ts"}
        assert len(rows) == 120

    def test_emission_is_byte_stable(self, social_result, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        emit_results({"sblfe": social_result}, a, svg=False)
        emit_results({"sblfe": social_result}, b, svg=False)
        for name in ("regret.csv", "selection.csv", "free_energy.csv", "summary.json"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


class TestSummary:
    def test_embeds_seed_and_hyperparameters(self, social_result, tmp_path):
        emit_results({"sblfe": social_result}, tmp_path, svg=False)
        summary = json.loads((tmp_path / "summary.json").read_text())
        run = summary["config"]["sblfe"]["run"]
        assert run["master_seed"] == 21
        for key in ("c", "lambda", "smoothing_w", "xi", "ts_samples", "ucb_C",
                    "tucb_C", "oucb_C", "oucb_beta1", "oucb_beta2", "eps0", "decay"):
            assert key in run
        final = summary["final_regret"]["sblfe"]
        assert final["trial"] == 60
        assert final["mean"] == social_result.curves.final_mean_regret

    def test_final_table_lists_every_algorithm(self, social_result, ts_result, tmp_path):
        emit_results({"sblfe": social_result, "ts": ts_result}, tmp_path, svg=False)
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert set(summary["final_regret"]) == {"sblfe", "ts"}


class TestFigures:
    def test_svg_files_rendered(self, social_result, tmp_path):
        written = emit_results({"sblfe": social_result}, tmp_path, svg=True)
        for name in ("regret.svg", "selection.svg", "free_energy.svg"):
            path = tmp_path / name
            assert path in written
            head = path.read_text()[:200]
            assert "<svg" in head or head.startswith("<?xml")

    def test_svg_suppressed(self, ts_result, tmp_path):
        emit_results({"ts": ts_result}, tmp_path, svg=False)
        assert not list(tmp_path.glob("*.svg"))


class TestRawRecords:
    def test_per_run_logs(self, social_result, tmp_path):
        emit_results({"sblfe": social_result}, tmp_path, svg=False, raw_records=True)
        files = sorted((tmp_path / "raw_records").glob("run*.csv"))
        assert len(files) == 3
        header, rows = read_csv(files[0])
        assert header == ["trial", "subject_action", "subject_reward",
                          "expected_regret_inc", "pseudo_regret_inc", "selected"]
        assert len(rows) == 60
        assert rows[0][5] in {"sblfe0", "optimal1"}
