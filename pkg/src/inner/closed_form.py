"""Exact resolvent of a quadratic: (I + lam A) x = c + lam b."""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla

from exceptions import InvalidInputError
from objectives.quadratic import Quadratic


def prox_quadratic_closed_form(quad: Quadratic, lam: float, c: np.ndarray) -> np.ndarray:
    """Dense SPD solve of the resolvent system; reduces to (I + lam A)^{-1} c when b = 0."""
    if lam <= 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    c = quad._check(c, "c")
    system = np.eye(quad.dim) + lam * quad.A
    return sla.solve(system, c + lam * quad.b, assume_a="pos")


def prox_quadratic_batch(quad: Quadratic, lam: float, centers: np.ndarray) -> np.ndarray:
    """Row-wise resolvent for an (N, n) batch of centers via the eigenbasis."""
    w, V = quad.eigh
    rhs = centers + lam * quad.b
    return ((rhs @ V) / (1.0 + lam * w)) @ V.T
