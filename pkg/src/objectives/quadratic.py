"""Strongly convex quadratic f(x) = 1/2 x^T A x - b^T x."""
from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from exceptions import InvalidInputError
from objectives.base import Objective
from objectives.linalg import is_symmetric, jacobi_eigh, random_orthogonal


class Quadratic(Objective):
    """Quadratic with symmetric positive-definite A and cached minimizer A^{-1} b.

    The eigendecomposition (used by the exact stationary analysis and the
    closed-form resolvent) is computed lazily by cyclic Jacobi rotations.
    """

    def __init__(self, A: np.ndarray, b: np.ndarray, mu: float | None = None):
        A = np.array(A, dtype=float)
        b = np.array(b, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidInputError(f"Quadratic: A must be square, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise InvalidInputError(f"Quadratic: b has shape {b.shape}, expected ({A.shape[0]},)")
        if not is_symmetric(A):
            raise InvalidInputError("Quadratic: A is not symmetric to 1e-12 relative")
        self.A = 0.5 * (A + A.T)
        self.b = b
        self.dim = A.shape[0]
        self._mu = mu
        self.A.setflags(write=False)
        self.b.setflags(write=False)

    @classmethod
    def from_spectrum(
        cls,
        eigenvalues: Sequence[float],
        rotation: np.ndarray | None = None,
        b: np.ndarray | None = None,
        b_scale: float = 1.0,
    ) -> Quadratic:
        """A = Q^T diag(eigenvalues) Q with b = b_scale * 1 unless b is given."""
        lam = np.asarray(eigenvalues, dtype=float)
        n = lam.size
        q = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
        A = q.T @ np.diag(lam) @ q
        A = 0.5 * (A + A.T)
        vec = b_scale * np.ones(n) if b is None else np.asarray(b, dtype=float)
        return cls(A, vec)

    @classmethod
    def random_rotated(
        cls, eigenvalues: Sequence[float], seed: int | None, b_scale: float = 1.0
    ) -> Quadratic:
        rotation = None
        if seed is not None:
            rotation = random_orthogonal(len(eigenvalues), np.random.default_rng(seed))
        return cls.from_spectrum(eigenvalues, rotation=rotation, b_scale=b_scale)

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = jacobi_eigh(self.A)
        if w[0] <= 0.0:
            raise InvalidInputError(f"Quadratic: A is not positive definite (min eigenvalue {w[0]:.3e})")
        if self._mu is not None and w[0] < self._mu * (1.0 - 1e-12):
            raise InvalidInputError(f"Quadratic: min eigenvalue {w[0]:.6g} below mu={self._mu:.6g}")
        return w, v

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.eigh[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.eigh[1]

    @cached_property
    def mu(self) -> float:  # type: ignore[override]
        return float(self._mu) if self._mu is not None else float(self.eigenvalues[0])

    @cached_property
    def x_star(self) -> np.ndarray:
        x = sla.solve(self.A, self.b, assume_a="pos")
        x.setflags(write=False)
        return x

    def value(self, x: np.ndarray) -> float:
        x = self._check(x)
        return float(0.5 * x @ self.A @ x - self.b @ x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        return self.A @ x - self.b

    def hvp(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        self._check(x)
        p = self._check(p, "p")
        return self.A @ p

    def hessian(self, x: np.ndarray) -> np.ndarray:
        self._check(x)
        return np.array(self.A)

    def hessian_diagonal(self, x: np.ndarray) -> np.ndarray:
        self._check(x)
        return np.diag(self.A).copy()
