"""Tests for the quadratic objective and its eigendecomposition."""
from __future__ import annotations

import numpy as np
import pytest

from exceptions import InvalidInputError
from objectives.linalg import is_symmetric, jacobi_eigh, random_orthogonal
from objectives.quadratic import Quadratic


class TestQuadraticValues:
    """Hand-evaluated values, gradients and Hessian-vector products."""

    def test_identity_value(self):
        """A=I2, b=0, x=(1,1) gives 1.0."""
        quad = Quadratic(np.eye(2), np.zeros(2))
        assert quad.value(np.array([1.0, 1.0])) == pytest.approx(1.0)

    def test_diagonal_value(self, diag_quad):
        """A=diag(1,1,3), b=0, x=(0,0,1) gives 1.5."""
        assert diag_quad.value(np.array([0.0, 0.0, 1.0])) == pytest.approx(1.5)

    def test_gradient_zero_at_minimizer(self):
        """A=I, b=(1,1): gradient at (1,1) is zero."""
        quad = Quadratic(np.eye(2), np.ones(2))
        np.testing.assert_array_equal(quad.gradient(np.ones(2)), np.zeros(2))

    def test_hvp_diagonal_action(self, diag_quad):
        """hvp with p=(0,0,1) returns (0,0,3)."""
        out = diag_quad.hvp(np.zeros(3), np.array([0.0, 0.0, 1.0]))
        np.testing.assert_allclose(out, [0.0, 0.0, 3.0])

    def test_hvp_of_zero_direction(self, rotated_quad, rng):
        """hvp is linear in p, so p=0 maps to 0."""
        np.testing.assert_array_equal(rotated_quad.hvp(rng.standard_normal(3), np.zeros(3)), np.zeros(3))

    def test_dimension_mismatch_raises(self, diag_quad):
        """A 2-vector on a 3-D quadratic is an invalid input."""
        with pytest.raises(InvalidInputError):
            diag_quad.value(np.zeros(2))


class TestQuadraticConstruction:
    """Symmetry, positive definiteness and cached quantities."""

    def test_asymmetric_matrix_rejected(self):
        """A matrix asymmetric beyond 1e-12 relative is refused."""
        with pytest.raises(InvalidInputError):
            Quadratic(np.array([[1.0, 0.5], [0.0, 1.0]]), np.zeros(2))

    def test_indefinite_matrix_rejected_on_eigh(self):
        """An indefinite A fails when its spectrum is first needed."""
        quad = Quadratic(np.diag([1.0, -1.0]), np.zeros(2))
        with pytest.raises(InvalidInputError):
            _ = quad.mu

    def test_rotated_quadratic_spectrum(self, rotated_quad):
        """The rotated quadratic keeps eigenvalues (1, 1, 3) and mu = 1."""
        np.testing.assert_allclose(rotated_quad.eigenvalues, [1.0, 1.0, 3.0], atol=1e-12)
        assert rotated_quad.mu == pytest.approx(1.0)

    def test_x_star_solves_system(self, rotated_quad):
        """A x* = b."""
        np.testing.assert_allclose(rotated_quad.A @ rotated_quad.x_star, rotated_quad.b, atol=1e-12)

    def test_explicit_mu_below_spectrum(self):
        """An explicit mu above the smallest eigenvalue is rejected."""
        quad = Quadratic(np.diag([1.0, 2.0]), np.zeros(2), mu=1.5)
        with pytest.raises(InvalidInputError):
            _ = quad.eigh


class TestLinalg:
    """Jacobi eigensolver and random rotations."""

    def test_jacobi_matches_reconstruction(self, rng):
        """V diag(w) V^T reproduces a random symmetric matrix."""
        m = rng.standard_normal((6, 6))
        m = m + m.T
        w, v = jacobi_eigh(m)
        np.testing.assert_allclose(v @ np.diag(w) @ v.T, m, atol=1e-10)
        assert np.all(np.diff(w) >= 0)

    def test_jacobi_denormal_off_diagonal(self):
        """A subnormal coupling is dropped without overflow in the rotation angle."""
        m = np.array([[1.0, 1e-310, 0.0], [1e-310, 2.0, 0.5], [0.0, 0.5, 3.0]])
        with np.errstate(over="raise", divide="raise", invalid="raise"):
            w, v = jacobi_eigh(m)
        assert np.all(np.isfinite(w)) and np.all(np.isfinite(v))
        np.testing.assert_allclose(w, np.linalg.eigvalsh(m), atol=1e-12)
        np.testing.assert_allclose(v.T @ v, np.eye(3), atol=1e-12)

    def test_random_orthogonal_is_orthogonal(self, rng):
        """Q^T Q = I."""
        q = random_orthogonal(5, rng)
        np.testing.assert_allclose(q.T @ q, np.eye(5), atol=1e-12)

    def test_is_symmetric(self):
        """Exact symmetric matrices pass, skewed ones fail."""
        assert is_symmetric(np.eye(3))
        assert not is_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
