"""Ridge-regularized binary logistic regression."""
from __future__ import annotations

import numpy as np
from scipy.special import expit

from exceptions import InvalidInputError
from objectives.base import Objective


class RidgeLogistic(Objective):
    """f(w) = (1/n) sum log(1 + exp(-y_i a_i^T w)) + (lambda_reg/2) ||w||^2.

    Strongly convex with mu = lambda_reg.
    """

    def __init__(self, features: np.ndarray, labels: np.ndarray, lambda_reg: float):
        features = np.array(features, dtype=float)
        labels = np.array(labels, dtype=float)
        if features.ndim != 2:
            raise InvalidInputError(f"RidgeLogistic: features must be 2-D, got shape {features.shape}")
        if labels.shape != (features.shape[0],):
            raise InvalidInputError(
                f"RidgeLogistic: labels have shape {labels.shape}, expected ({features.shape[0]},)"
            )
        if not np.all(np.abs(labels) == 1.0):
            raise InvalidInputError("RidgeLogistic: labels must be +1 or -1")
        if lambda_reg <= 0:
            raise InvalidInputError(f"RidgeLogistic: lambda_reg must be > 0, got {lambda_reg}")
        self.features = features
        self.labels = labels
        self.lambda_reg = float(lambda_reg)
        self.n_samples, self.dim = features.shape
        self.mu = self.lambda_reg
        self.features.setflags(write=False)
        self.labels.setflags(write=False)

    def _margins(self, w: np.ndarray) -> np.ndarray:
        return self.labels * (self.features @ w)

    def value(self, x: np.ndarray) -> float:
        x = self._check(x)
        z = self._margins(x)
        # log(1 + exp(-z)) without overflow for large |z|
        loss = np.log1p(np.exp(-np.abs(z))) + np.maximum(0.0, -z)
        return float(np.mean(loss) + 0.5 * self.lambda_reg * (x @ x))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        z = self._margins(x)
        weights = -self.labels * expit(-z)
        return self.features.T @ weights / self.n_samples + self.lambda_reg * x

    def _curvature_weights(self, x: np.ndarray) -> np.ndarray:
        s = expit(self.features @ x)
        return s * (1.0 - s)

    def hvp(self, x: np.ndarray, p: np.ndarray) -> np.ndarray:
        x = self._check(x)
        p = self._check(p, "p")
        d = self._curvature_weights(x)
        return self.features.T @ (d * (self.features @ p)) / self.n_samples + self.lambda_reg * p

    def hessian(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        d = self._curvature_weights(x)
        h = self.features.T @ (d[:, None] * self.features) / self.n_samples
        h[np.diag_indices_from(h)] += self.lambda_reg
        return 0.5 * (h + h.T)

    def hessian_diagonal(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        d = self._curvature_weights(x)
        return (d @ (self.features**2)) / self.n_samples + self.lambda_reg
