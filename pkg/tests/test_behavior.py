import numpy as np
import pytest

from socialbandit.behavior import (
    BehaviorCounts,
    action_set_lookup,
    ema_update,
    estimate_policy,
    init_counts,
    restrict_observation,
)
from socialbandit.errors import ConfigurationError, InvalidPolicyError, ParameterError


class TestInit:
    def test_all_ones(self):
        assert np.array_equal(init_counts(3, 0.1).counts, [1.0, 1.0, 1.0])
        assert np.array_equal(init_counts(10, 0.1).counts, np.ones(10))

    def test_initial_estimate_is_uniform(self):
        est = estimate_policy(init_counts(4, 0.1), smoothing=0.15, floor=1e-9)
        assert np.allclose(est, 0.25, atol=1e-8)

    def test_too_few_actions(self):
        with pytest.raises(ParameterError):
            init_counts(1, 0.1)

    def test_step_out_of_range(self):
        with pytest.raises(ParameterError):
            init_counts(3, 1.5)


class TestUpdate:
    def test_single_observation(self):
        counts = init_counts(3, 0.1)
        ema_update(counts, 1)
        assert np.allclose(counts.counts, [0.9, 1.0, 0.9], atol=1e-12)

    def test_zero_step_freezes(self):
        counts = init_counts(3, 0.0)
        ema_update(counts, 2)
        assert np.array_equal(counts.counts, [1.0, 1.0, 1.0])

    def test_full_step_replaces(self):
        counts = init_counts(2, 1.0)
        ema_update(counts, 0)
        assert np.array_equal(counts.counts, [1.0, 0.0])

    def test_out_of_range_rejected(self):
        counts = init_counts(3, 0.1)
        for bad in (-1, 3):
            with pytest.raises(InvalidPolicyError):
                ema_update(counts, bad)

    def test_count_sum_recurrence(self):
        rng = np.random.default_rng(0)
        for step in (0.05, 0.1, 0.5):
            counts = init_counts(6, step)
            for t in range(1, 120):
                ema_update(counts, int(rng.integers(6)))
                expected = 6 * (1 - step) ** t + (1 - (1 - step) ** t)
                assert counts.counts.sum() == pytest.approx(expected, rel=1e-9)


class TestEstimate:
    def test_plain_normalization(self):
        counts = init_counts(3, 0.1)
        counts.counts[:] = [0.9, 1.0, 0.9]
        est = estimate_policy(counts, smoothing=0.0, floor=1e-12)
        assert np.allclose(est, [0.32143, 0.35714, 0.32143], atol=1e-5)

    def test_equal_counts_give_uniform(self):
        counts = init_counts(5, 0.1)
        counts.counts[:] = 0.37
        for w in (0.0, 0.15, 0.9):
            assert np.allclose(estimate_policy(counts, w, 1e-12), 0.2, atol=1e-9)

    def test_one_hot_counts_with_smoothing(self):
        counts = init_counts(3, 0.1)
        counts.counts[:] = [1.0, 0.0, 0.0]
        est = estimate_policy(counts, smoothing=0.15, floor=1e-12)
        assert np.allclose(est, [0.9, 0.05, 0.05], atol=1e-9)

    def test_all_zero_counts_rejected(self):
        counts = init_counts(3, 0.1)
        counts.counts[:] = 0.0
        with pytest.raises(InvalidPolicyError):
            estimate_policy(counts, 0.15, 1e-6)

    def test_strictly_positive_valid_policy(self):
        rng = np.random.default_rng(1)
        counts = init_counts(4, 0.1)
        for _ in range(300):
            ema_update(counts, int(rng.integers(4)))
        est = estimate_policy(counts, 0.15, 1e-6)
        assert est.min() > 0.0
        assert est.sum() == pytest.approx(1.0, abs=1e-9)

    def test_deterministic_agent_limit(self):
        # An agent playing action 2 forever: mass converges to (1-w) + w/K,
        # monotonically once the initial transient has passed.
        w, size = 0.15, 4
        counts = init_counts(size, 0.1)
        history = []
        for _ in range(400):
            ema_update(counts, 2)
            history.append(estimate_policy(counts, w, 1e-9)[2])
        limit = (1 - w) + w / size
        assert history[-1] == pytest.approx(limit, abs=1e-4)
        tail = history[10:]
        assert all(b >= a - 1e-12 for a, b in zip(tail, tail[1:]))


class TestRestriction:
    def test_maps_present_action(self):
        lookup = action_set_lookup((3, 5, 7), 10)
        assert restrict_observation(5, lookup) == 1

    def test_drops_absent_action(self):
        lookup = action_set_lookup((3, 5, 7), 10)
        assert restrict_observation(4, lookup) is None

    def test_subset_always_maps(self):
        # Observed agent's actions form a subset of the observer's set.
        observer = action_set_lookup(range(10), 10)
        for a in (0, 1, 2):
            assert restrict_observation(a, observer) == a

    def test_out_of_catalog_rejected(self):
        lookup = action_set_lookup((0, 1), 4)
        with pytest.raises(ConfigurationError):
            restrict_observation(7, lookup)

    def test_bad_action_set_rejected(self):
        with pytest.raises(ConfigurationError):
            action_set_lookup((0, 99), 10)


class TestBehaviorCountsType:
    def test_carries_step(self):
        assert BehaviorCounts(3, 0.25).step == 0.25

    def test_counts_stay_positive_under_use(self):
        rng = np.random.default_rng(2)
        counts = BehaviorCounts(5, 0.1)
        for _ in range(500):
            counts.observe(int(rng.integers(5)))
            assert np.all(counts.counts >= 0.0)
            assert counts.counts.sum() > 0.0
