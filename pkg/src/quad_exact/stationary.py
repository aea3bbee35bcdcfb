"""Exact stationary MSE, asymptotic constant and stability table for quadratics (fixed gamma)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog

from exceptions import ConfigurationError, NonDecouplingNoiseError, UnstableDynamicsError
from iron.noise import NoiseModel
from models.shared import NoiseKind
from objectives.quadratic import Quadratic
from quad_exact.lyapunov import lyapunov_solve
from quad_exact.recursion import eigen_recursion

logger = structlog.get_logger(__name__)

COMMUTATOR_REL_TOL = 1e-10


def direction_noise_levels(quad: Quadratic, rho: float | None = None, noise: NoiseModel | None = None) -> np.ndarray:
    """Per-eigendirection noise std rho_i.

    Isotropic noise gives rho_i = rho. A general Sigma must commute with A;
    then rho_i^2 is the diagonal of V^T Sigma V.

    Raises:
        NonDecouplingNoiseError: Sigma does not commute with A
    """
    n = quad.dim
    if noise is None or noise.kind == NoiseKind.ISOTROPIC:
        level = noise.rho if noise is not None else float(rho or 0.0)
        return np.full(n, level)

    sigma = noise.covariance(n)
    comm = float(np.linalg.norm(quad.A @ sigma - sigma @ quad.A))
    scale = float(np.linalg.norm(quad.A) * np.linalg.norm(sigma))
    if comm > COMMUTATOR_REL_TOL * max(scale, np.finfo(float).tiny):
        raise NonDecouplingNoiseError(comm)
    V = quad.eigenvectors
    return np.sqrt(np.clip(np.diag(V.T @ sigma @ V), 0.0, None))


def stationary_mse_exact(
    quad: Quadratic,
    alpha: float,
    gamma: float,
    mu: float,
    rho: float | None = None,
    *,
    noise: NoiseModel | None = None,
) -> float:
    """tr(P_xx) = sum_i p11(a_i).

    Raises:
        UnstableDynamicsError: some direction has spectral radius >= 1
    """
    total = 0.0
    for a, rho_i in zip(quad.eigenvalues, direction_noise_levels(quad, rho, noise)):
        cov = lyapunov_solve(eigen_recursion(a, alpha, gamma, mu, rho_i))
        if not cov.stable:
            raise UnstableDynamicsError(eigenvalue=a, alpha=alpha, spectral_radius=cov.spectral_radius)
        total += cov.p11
    return total


def asymptotic_constant(quad: Quadratic, gamma: float, rho: float | None = None, *, noise: NoiseModel | None = None) -> float:
    """C_quad = gamma^2 sum_i rho_i^2 / a_i^2 (gamma^2 rho^2 tr(A^-2) when isotropic)."""
    levels = direction_noise_levels(quad, rho, noise)
    return float(gamma * gamma * np.sum(levels**2 / quad.eigenvalues**2))


@dataclass(frozen=True)
class StabilityRow:
    alpha: float
    spectral_radii: tuple[float, ...]

    @property
    def max_radius(self) -> float:
        return max(self.spectral_radii)

    @property
    def stable(self) -> bool:
        return self.max_radius < 1.0


@dataclass(frozen=True)
class StabilityTable:
    eigenvalues: tuple[float, ...]
    rows: tuple[StabilityRow, ...]

    @property
    def threshold_alpha(self) -> float | None:
        """Smallest grid alpha at which every direction is stable."""
        for row in self.rows:
            if row.stable:
                return row.alpha
        return None


def stability_threshold(
    quad: Quadratic, gamma: float, mu: float, rho: float, alpha_grid: Sequence[float]
) -> StabilityTable:
    """Spectral radius of M(a_i, alpha) for every direction and grid alpha.

    rho does not enter M; it is accepted so callers can pass one parameter set.
    """
    grid = [float(a) for a in alpha_grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ConfigurationError("stability_threshold: alpha grid must be nonempty and strictly ascending")
    eigenvalues = tuple(float(a) for a in quad.eigenvalues)
    rows = tuple(
        StabilityRow(
            alpha=alpha,
            spectral_radii=tuple(eigen_recursion(a, alpha, gamma, mu, rho).spectral_radius for a in eigenvalues),
        )
        for alpha in grid
    )
    table = StabilityTable(eigenvalues=eigenvalues, rows=rows)
    logger.info("stability_table", n_alpha=len(rows), threshold_alpha=table.threshold_alpha)
    return table
