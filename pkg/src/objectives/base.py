"""Objective abstraction shared by the outer iteration, inner solver and metrics."""
from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from exceptions import InvalidInputError


class Objective(ABC):
    """Smooth objective exposing value, gradient and Hessian-vector products.

    Instances are immutable after construction; every method is a pure
    function of its arguments and safe to call from several threads.
    """

    dim: int
    mu: float
    # True when gradient_batch and hessian_batch are array expressions, not row loops
    vectorized: bool = False

    @abstractmethod
    def value(self, x: np.ndarray) -> float: ...

    @abstractmethod
    def gradient(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def hvp(self, x: np.ndarray, p: np.ndarray) -> np.ndarray: ...

    def hessian(self, x: np.ndarray) -> np.ndarray:
        """Dense Hessian, assembled column by column from hvp unless overridden."""
        x = self._check(x)
        eye = np.eye(self.dim)
        return np.column_stack([self.hvp(x, eye[:, j]) for j in range(self.dim)])

    def hessian_diagonal(self, x: np.ndarray) -> np.ndarray:
        return np.diag(self.hessian(x)).copy()

    def gradient_batch(self, X: np.ndarray) -> np.ndarray:
        return np.stack([self.gradient(x) for x in self._check_batch(X)])

    def hessian_batch(self, X: np.ndarray) -> np.ndarray:
        """(N, dim, dim) stack of dense Hessians."""
        return np.stack([self.hessian(x) for x in self._check_batch(X)])

    def _check_batch(self, X: np.ndarray, name: str = "X") -> np.ndarray:
        arr = np.asarray(X, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise InvalidInputError(
                f"{type(self).__name__}: {name} has shape {arr.shape}, expected (N, {self.dim})"
            )
        return arr

    def _check(self, x: np.ndarray, name: str = "x") -> np.ndarray:
        arr = np.asarray(x, dtype=float)
        if arr.shape != (self.dim,):
            raise InvalidInputError(
                f"{type(self).__name__}: {name} has shape {arr.shape}, expected ({self.dim},)"
            )
        return arr

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, mu={self.mu:.6g})"
