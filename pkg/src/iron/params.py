"""Derived per-step quantities of the outer iteration."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from exceptions import ConfigurationError, InvalidInputError


@dataclass(frozen=True)
class StepParams:
    """alpha, tau = 1/alpha + mu/gamma, lam = alpha / (gamma (1 + tau)) and the center."""
    alpha: float
    tau: float
    lam: float
    center: np.ndarray


def validate_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha < 1.0:
        raise ConfigurationError(
            f"alpha must be >= 1, got {alpha}",
            details="the outer stepsize alpha must be at least 1",
        )
    return alpha


def step_params(alpha: float, gamma: float, mu: float, x: np.ndarray, v: np.ndarray) -> StepParams:
    """Compute tau, lambda and the inertial center c = (v + tau x) / (1 + tau).

    Raises:
        ConfigurationError: alpha < 1 or mu <= 0
        InvalidInputError: gamma <= 0 or mismatched x, v
    """
    alpha = validate_alpha(alpha)
    if gamma <= 0:
        raise InvalidInputError(f"gamma must be > 0, got {gamma}")
    if mu <= 0:
        raise ConfigurationError(
            f"dynamics mu must be > 0, got {mu}",
            details="set dynamics.mu_dyn for objectives that are not strongly convex",
        )
    if np.shape(x) != np.shape(v):
        raise InvalidInputError(f"x and v shapes differ: {np.shape(x)} vs {np.shape(v)}")
    tau = 1.0 / alpha + mu / gamma
    lam = alpha / (gamma * (1.0 + tau))
    center = (v + tau * x) / (1.0 + tau)
    return StepParams(alpha=alpha, tau=tau, lam=lam, center=center)


def center_offset_form(x: np.ndarray, v: np.ndarray, tau: float) -> np.ndarray:
    """c = x + (v - x)/(1 + tau): offset proportional to the physical velocity."""
    return x + (v - x) / (1.0 + tau)


def damping_update(gamma: float, alpha: float, mu: float) -> float:
    """gamma+ = (gamma + alpha mu) / (1 + alpha), a convex combination of gamma and mu."""
    return (gamma + alpha * mu) / (1.0 + alpha)


def velocity_update(x_new: np.ndarray, x_old: np.ndarray, alpha: float) -> np.ndarray:
    return x_new + (x_new - x_old) / alpha
