"""Tests for the nonconvex log-cosh regression objective."""
from __future__ import annotations

import numpy as np
import pytest

from objectives.data import convex_log_cosh
from objectives.log_cosh import LogCosh, log_cosh


class TestLogCosh:
    """Values, gradients and the planted instance."""

    def test_value_at_origin(self):
        """A=I1, b=0, x=0 gives 0."""
        obj = LogCosh(np.eye(1), np.zeros(1))
        assert obj.value(np.zeros(1)) == 0.0

    def test_gradient_vanishes_at_origin(self, planted_logcosh):
        """tanh(0)=0 annihilates the gradient for any A, b."""
        obj, _ = planted_logcosh
        np.testing.assert_array_equal(obj.gradient(np.zeros(obj.dim)), np.zeros(obj.dim))

    def test_log_cosh_stable_for_large_inputs(self):
        """log cosh(x) ~ |x| - log 2 without overflow."""
        out = log_cosh(np.array([800.0, -800.0]))
        np.testing.assert_allclose(out, [800.0 - np.log(2.0)] * 2)

    def test_planted_point_is_global_minimizer(self, planted_logcosh):
        """f(x0) = f(-x0) = 0 and the gradient vanishes there."""
        obj, x0 = planted_logcosh
        assert obj.value(x0) == pytest.approx(0.0, abs=1e-24)
        assert obj.value(-x0) == pytest.approx(0.0, abs=1e-24)
        np.testing.assert_allclose(obj.gradient(x0), np.zeros(obj.dim), atol=1e-14)

    def test_planted_entries_are_signs(self, planted_logcosh):
        """x0 lies in {-1, +1}^n."""
        _, x0 = planted_logcosh
        assert set(np.abs(x0)) == {1.0}

    def test_mu_is_zero(self, planted_logcosh):
        """The objective is not strongly convex."""
        assert planted_logcosh[0].mu == 0.0

    def test_convex_instance_has_psd_hessian(self, rng):
        """A >= 0, b <= 0 keeps the Hessian positive semidefinite everywhere."""
        obj = convex_log_cosh(5, 3, seed=1)
        for _ in range(50):
            w = np.linalg.eigvalsh(obj.hessian(2.0 * rng.standard_normal(3)))
            assert w.min() >= -1e-12

    def test_batch_derivatives_match_rows(self, planted_logcosh, rng):
        """gradient_batch and hessian_batch equal the per-point versions row by row."""
        obj, _ = planted_logcosh
        X = 1.5 * rng.standard_normal((6, obj.dim))
        G = obj.gradient_batch(X)
        H = obj.hessian_batch(X)
        assert obj.vectorized
        for i, x in enumerate(X):
            np.testing.assert_allclose(G[i], obj.gradient(x), rtol=1e-12, atol=1e-14)
            np.testing.assert_allclose(H[i], obj.hessian(x), rtol=1e-12, atol=1e-14)

    def test_conditioned_hessian_positive_near_planted_point(self, conditioned_logcosh, rng):
        """With m = 20 the Hessian is positive definite in a 0.1 box around x0."""
        obj, x0 = conditioned_logcosh
        X = x0 + 0.1 * rng.uniform(-1.0, 1.0, size=(200, obj.dim))
        assert np.linalg.eigvalsh(obj.hessian_batch(X))[:, 0].min() > 0.0
