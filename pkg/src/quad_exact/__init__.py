"""Exact stationary analysis of IRON_FI on quadratics."""
from quad_exact.lyapunov import StationaryCovariance, lyapunov_solve, solve_moment_system
from quad_exact.recursion import EigenRecursion, eigen_recursion
from quad_exact.stationary import (
    StabilityTable,
    asymptotic_constant,
    direction_noise_levels,
    stability_threshold,
    stationary_mse_exact,
)

__all__ = [
    "EigenRecursion",
    "StationaryCovariance",
    "StabilityTable",
    "eigen_recursion",
    "lyapunov_solve",
    "solve_moment_system",
    "stationary_mse_exact",
    "asymptotic_constant",
    "direction_noise_levels",
    "stability_threshold",
]
