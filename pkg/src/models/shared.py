"""Shared enum definitions for iron-fi.

Usage:
    from models.shared import GammaMode, WarmStart, ObjectiveKind
"""
from __future__ import annotations

from enum import Enum


class ObjectiveKind(str, Enum):
    """Objectives the experiment CLI can construct."""
    QUADRATIC = "quadratic"
    RIDGE_LOGISTIC = "ridge_logistic"
    LOG_COSH = "log_cosh"


class GammaMode(str, Enum):
    """How the damping state evolves between outer steps.

    - FIXED: gamma frozen at gamma0 (linear time-invariant quadratic recursion)
    - UPDATED: gamma <- (gamma + alpha*mu) / (1 + alpha)
    """
    FIXED = "fixed"
    UPDATED = "updated"


class WarmStart(str, Enum):
    """Initial inner iterate for the resolvent solve."""
    PREVIOUS_X = "previous_x"
    CENTER = "center"


class LinearSolveKind(str, Enum):
    """Linear solver for the LM system (I + lambda H) s = -g."""
    AUTO = "auto"
    DIRECT = "direct"
    CG = "cg"


class Curvature(str, Enum):
    """Curvature model H inside the LM matrix."""
    EXACT = "exact"
    DIAGONAL = "diagonal"


class NoiseKind(str, Enum):
    """Diffusion covariance structure."""
    ISOTROPIC = "isotropic"
    GENERAL = "general"


class InitKind(str, Enum):
    """Particle initialization."""
    POINT = "point"
    GAUSSIAN_BALL = "gaussian_ball"
