"""Stationary covariance of a stable 2x2 recursion: P = M P M^T + Q."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from exceptions import NumericalDegeneracyError
from quad_exact.recursion import EigenRecursion, spectral_radius_2x2


@dataclass(frozen=True)
class StationaryCovariance:
    """P is None when the recursion is unstable."""
    P: np.ndarray | None
    spectral_radius: float
    stable: bool

    @property
    def p11(self) -> float:
        """Stationary per-coordinate position MSE."""
        if self.P is None:
            return float("nan")
        return float(self.P[0, 0])


def moment_matrix(m: np.ndarray) -> np.ndarray:
    """K with (p11, p12, p22) -> entries of M P M^T for symmetric P."""
    a, b = m[0]
    c, d = m[1]
    return np.array(
        [
            [a * a, 2.0 * a * b, b * b],
            [a * c, a * d + b * c, b * d],
            [c * c, 2.0 * c * d, d * d],
        ]
    )


def solve_moment_system(m: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Solve (I - K) p = (q11, q12, q22) by LU with partial pivoting.

    Raises:
        NumericalDegeneracyError: the 3x3 system is singular
    """
    system = np.eye(3) - moment_matrix(m)
    rhs = np.array([q[0, 0], q[0, 1], q[1, 1]])
    try:
        lu, piv = sla.lu_factor(system, check_finite=True)
    except (sla.LinAlgError, ValueError) as e:
        raise NumericalDegeneracyError("moment system could not be factored", details=str(e)) from e
    diag = np.abs(np.diag(lu))
    if diag.min() <= np.finfo(float).eps * max(diag.max(), 1.0):
        raise NumericalDegeneracyError(
            "moment system is singular",
            details=f"smallest pivot {diag.min():.3e}",
        )
    p11, p12, p22 = sla.lu_solve((lu, piv), rhs)
    return np.array([[p11, p12], [p12, p22]])


def lyapunov_solve(rec: EigenRecursion) -> StationaryCovariance:
    """Stationary covariance for one eigendirection, or stable=False without P."""
    rho_m = spectral_radius_2x2(rec.M)
    if rho_m >= 1.0:
        return StationaryCovariance(P=None, spectral_radius=rho_m, stable=False)
    return StationaryCovariance(P=solve_moment_system(rec.M, rec.Q), spectral_radius=rho_m, stable=True)


def iterate_lyapunov(m: np.ndarray, q: np.ndarray, n_iter: int) -> np.ndarray:
    """P <- M P M^T + Q from P = 0."""
    p = np.zeros_like(q, dtype=float)
    for _ in range(n_iter):
        p = m @ p @ m.T + q
    return p


def lyapunov_residual(m: np.ndarray, q: np.ndarray, p: np.ndarray) -> float:
    """||P - M P M^T - Q||_F."""
    return float(np.linalg.norm(p - m @ p @ m.T - q))
