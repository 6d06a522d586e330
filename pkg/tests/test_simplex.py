import math

import numpy as np
import pytest

from socialbandit.errors import DivergenceUndefinedError, InvalidPolicyError, ParameterError
from socialbandit.simplex import (
    as_policy,
    entropy,
    kl_divergence,
    mix_uniform,
    regularize,
    sample_action,
    uniform_policy,
)


def random_simplex(rng, size):
    p = rng.dirichlet(np.ones(size))
    return p / p.sum()


class TestEntropy:
    def test_uniform_is_maximal(self):
        assert entropy(uniform_policy(4)) == pytest.approx(math.log(4), abs=1e-12)

    def test_one_hot_is_zero(self):
        assert entropy([1.0, 0.0, 0.0]) == 0.0

    def test_direct_value(self):
        # -0.8 log 0.8 - 0.2 log 0.2
        assert entropy([0.8, 0.2]) == pytest.approx(0.500402, abs=1e-6)

    def test_bounds_on_random_policies(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            size = int(rng.integers(2, 8))
            h = entropy(random_simplex(rng, size))
            assert -1e-12 <= h <= math.log(size) + 1e-12

    def test_rejects_invalid(self):
        with pytest.raises(InvalidPolicyError):
            entropy([])
        with pytest.raises(InvalidPolicyError):
            entropy([0.7, 0.7])
        with pytest.raises(InvalidPolicyError):
            entropy([1.2, -0.2])

    def test_mixing_toward_uniform_never_loses_entropy(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            p = random_simplex(rng, int(rng.integers(2, 6)))
            for w in (0.0, 0.15, 0.5, 1.0):
                assert entropy(mix_uniform(p, w)) >= entropy(p) - 1e-12


class TestKL:
    def test_identical_is_zero(self):
        u = uniform_policy(3)
        assert kl_divergence(u, u) == 0.0

    def test_one_hot_vs_uniform(self):
        assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-12)

    def test_direct_value(self):
        assert kl_divergence([0.8, 0.2], [0.5, 0.5]) == pytest.approx(0.192745, abs=1e-6)

    def test_zero_in_q_where_p_positive(self):
        with pytest.raises(DivergenceUndefinedError):
            kl_divergence([0.5, 0.5], [1.0, 0.0])

    def test_nonnegative_and_zero_iff_equal(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            size = int(rng.integers(2, 6))
            p = random_simplex(rng, size)
            q = random_simplex(rng, size)
            d = kl_divergence(p, q)
            assert d >= 0.0
            if np.allclose(p, q, atol=1e-9):
                assert d < 1e-9
            assert kl_divergence(p, p) <= 1e-12

    def test_length_mismatch(self):
        with pytest.raises(InvalidPolicyError):
            kl_divergence([0.5, 0.5], [0.4, 0.3, 0.3])


class TestRegularize:
    def test_vanishing_floor_keeps_policy(self):
        p = np.array([0.3, 0.45, 0.25])
        assert np.allclose(regularize(p, 1e-12), p, atol=1e-10)

    def test_one_hot_example(self):
        out = regularize([1.0, 0.0], 0.01)
        assert out[0] == pytest.approx(1.01 / 1.02, abs=1e-9)
        assert out[1] == pytest.approx(0.01 / 1.02, abs=1e-9)

    def test_floor_is_exact_for_zero_entries(self):
        floor = 1e-4
        out = regularize([1.0, 0.0, 0.0], floor)
        assert out.min() == floor / (1.0 + 3 * floor)

    def test_uniform_fixed_point(self):
        u = uniform_policy(5)
        assert np.allclose(regularize(u, 0.3), u, atol=1e-12)

    def test_preserves_argmax(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = random_simplex(rng, 5)
            assert np.argmax(regularize(p, 0.05)) == np.argmax(p)

    def test_rejects_nonpositive_floor(self):
        for bad in (0.0, -1e-9):
            with pytest.raises(ParameterError):
                regularize([0.5, 0.5], bad)

    def test_output_is_valid_policy(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            out = regularize(random_simplex(rng, 4), 0.01)
            assert out.sum() == pytest.approx(1.0, abs=1e-12)
            assert out.min() > 0.0


class TestMixUniform:
    def test_zero_weight_identity(self):
        p = np.array([0.9, 0.1])
        assert np.allclose(mix_uniform(p, 0.0), p)

    def test_full_weight_is_uniform(self):
        assert np.allclose(mix_uniform([0.9, 0.1], 1.0), [0.5, 0.5])

    def test_one_hot_example(self):
        out = mix_uniform([1.0] + [0.0] * 9, 0.15)
        assert out[0] == pytest.approx(0.865, abs=1e-12)
        assert np.allclose(out[1:], 0.015, atol=1e-12)

    def test_rejects_weight_outside_unit_interval(self):
        for bad in (-0.1, 1.1):
            with pytest.raises(ParameterError):
                mix_uniform([0.5, 0.5], bad)


class TestSampleAction:
    def test_one_hot_always_picked(self):
        rng = np.random.default_rng(5)
        p = [0.0, 0.0, 0.0, 1.0]
        assert all(sample_action(p, rng) == 3 for _ in range(200))

    def test_uniform_two_arm_frequency(self):
        rng = np.random.default_rng(6)
        draws = [sample_action([0.5, 0.5], rng) for _ in range(100_000)]
        freq = draws.count(0) / len(draws)
        assert 0.49 <= freq <= 0.51

    def test_deterministic_given_seed(self):
        a = [sample_action([0.3, 0.7], np.random.default_rng(7)) for _ in range(1)]
        first = [sample_action([0.3, 0.7], np.random.default_rng(42)) for _ in range(50)]
        second = [sample_action([0.3, 0.7], np.random.default_rng(42)) for _ in range(50)]
        assert first == second
        assert a == [sample_action([0.3, 0.7], np.random.default_rng(7))]


class TestValidation:
    def test_small_drift_renormalized(self):
        p = as_policy([0.5 + 4e-7, 0.5])
        assert p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_large_drift_rejected(self):
        with pytest.raises(InvalidPolicyError):
            as_policy([0.5, 0.51])

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidPolicyError):
            as_policy([np.nan, 1.0])
