"""Tests for ridge logistic regression and its synthetic data."""
from __future__ import annotations

import numpy as np
import pytest

from exceptions import InvalidInputError
from objectives.data import synthetic_logistic
from objectives.ridge_logistic import RidgeLogistic


class TestRidgeLogistic:
    """Loss, gradient and validation."""

    def test_single_sample_gradient(self):
        """a=(1), y=+1, lambda=1 at w=0 has gradient -0.5."""
        obj = RidgeLogistic(np.array([[1.0]]), np.array([1.0]), lambda_reg=1.0)
        np.testing.assert_allclose(obj.gradient(np.zeros(1)), [-0.5])

    def test_value_at_zero_is_log2(self):
        """Every margin is 0 at w=0, so the loss is log 2."""
        obj = RidgeLogistic(np.array([[1.0, 2.0], [-1.0, 0.5]]), np.array([1.0, -1.0]), lambda_reg=0.3)
        assert obj.value(np.zeros(2)) == pytest.approx(np.log(2.0))

    def test_value_finite_for_huge_margins(self):
        """Margins beyond 700 neither overflow nor produce nan."""
        obj = RidgeLogistic(np.array([[1.0]]), np.array([-1.0]), lambda_reg=0.1)
        value = obj.value(np.array([1000.0]))
        assert np.isfinite(value)
        assert value == pytest.approx(1000.0 + 0.05 * 1000.0**2)

    def test_mu_is_lambda_reg(self):
        """Strong convexity comes from the ridge term."""
        obj = RidgeLogistic(np.ones((2, 1)), np.array([1.0, -1.0]), lambda_reg=0.25)
        assert obj.mu == 0.25

    def test_labels_must_be_signs(self):
        """Labels other than +1/-1 are rejected."""
        with pytest.raises(InvalidInputError):
            RidgeLogistic(np.ones((2, 1)), np.array([1.0, 0.0]), lambda_reg=0.1)

    def test_lambda_reg_positive(self):
        """lambda_reg = 0 is rejected."""
        with pytest.raises(InvalidInputError):
            RidgeLogistic(np.ones((2, 1)), np.array([1.0, -1.0]), lambda_reg=0.0)


class TestSyntheticLogistic:
    """Seeded data generation."""

    def test_deterministic_per_seed(self):
        """Same seed, same features, labels and true weights."""
        a, wa = synthetic_logistic(4, 30, 0.1, seed=5)
        b, wb = synthetic_logistic(4, 30, 0.1, seed=5)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)
        np.testing.assert_array_equal(wa, wb)

    def test_shapes(self):
        """features are (n, d), labels (n,), weights (d,)."""
        obj, w = synthetic_logistic(6, 40, 0.1, seed=0)
        assert obj.features.shape == (40, 6)
        assert obj.labels.shape == (40,)
        assert w.shape == (6,)
        assert set(np.unique(obj.labels)) <= {-1.0, 1.0}
