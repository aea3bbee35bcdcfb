"""Mildly nonconvex log-cosh regression f(x) = 1/2 ||A u(x) - b||^2, u_i = log cosh x_i."""
from __future__ import annotations

import math

import numpy as np

from exceptions import InvalidInputError
from objectives.base import Objective

_LOG2 = math.log(2.0)


def log_cosh(x: np.ndarray) -> np.ndarray:
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - _LOG2


class LogCosh(Objective):
    """Composite least squares with gradient (Q u(x) - c) * tanh(x).

    Q = A^T A and c = A^T b are cached. mu is 0: the objective is not
    strongly convex, so the dynamics mu must be configured separately.
    """

    vectorized = True

    def __init__(self, A: np.ndarray, b: np.ndarray):
        A = np.array(A, dtype=float)
        b = np.array(b, dtype=float)
        if A.ndim != 2:
            raise InvalidInputError(f"LogCosh: A must be 2-D, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise InvalidInputError(f"LogCosh: b has shape {b.shape}, expected ({A.shape[0]},)")
        self.A = A
        self.b = b
        self.Q = A.T @ A
        self.c = A.T @ b
        self.dim = A.shape[1]
        self.mu = 0.0
        for arr in (self.A, self.b, self.Q, self.c):
            arr.setflags(write=False)

    def value(self, x: np.ndarray) -> float:
        x = self._check(x)
        r = self.A @ log_cosh(x) - self.b
        return float(0.5 * (r @ r))

    def _outer_residual(self, x: np.ndarray) -> np.ndarray:
        return self.Q @ log_cosh(x) - self.c

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        return self._outer_residual(x) * np.tanh(x)

    def hvp(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        x = self._check(x)
        p = self._check(p, "p")
        t = np.tanh(x)
        # product rule: T Q T p + diag((Qu - c) * sech^2) p
        return t * (self.Q @ (t * p)) + self._outer_residual(x) * (1.0 - t * t) * p

    def hessian(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        t = np.tanh(x)
        h = t[:, None] * self.Q * t[None, :]
        h[np.diag_indices_from(h)] += self._outer_residual(x) * (1.0 - t * t)
        return 0.5 * (h + h.T)

    def hessian_diagonal(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        t = np.tanh(x)
        return t * t * np.diag(self.Q) + self._outer_residual(x) * (1.0 - t * t)

    def gradient_batch(self, X: np.ndarray) -> np.ndarray:
        X = self._check_batch(X)
        # Q is symmetric, so row-wise Q u = u Q
        return (log_cosh(X) @ self.Q - self.c) * np.tanh(X)

    def hessian_batch(self, X: np.ndarray) -> np.ndarray:
        X = self._check_batch(X)
        T = np.tanh(X)
        R = log_cosh(X) @ self.Q - self.c
        H = T[:, :, None] * self.Q[None, :, :] * T[:, None, :]
        idx = np.arange(self.dim)
        H[:, idx, idx] += R * (1.0 - T * T)
        return 0.5 * (H + np.swapaxes(H, 1, 2))
