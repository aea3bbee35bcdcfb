from __future__ import annotations

from typing import Any

import numpy as np

from utils.error_handler import IronError


class InvalidInputError(IronError):
    """Vector or matrix argument has the wrong shape or non-finite entries."""

    def __init__(self, message: str, details: str = ""):
        super().__init__(error_type="INVALID_INPUT", message=message, details=details)


class ConfigurationError(IronError):
    """Experiment or solver configuration violates a precondition."""

    def __init__(self, message: str, details: str = ""):
        super().__init__(error_type="CONFIGURATION", message=message, details=details)


class InvalidDataError(IronError):
    """Measured data cannot be used (e.g. nonpositive MSE in a log-log fit)."""

    def __init__(self, message: str, details: str = ""):
        super().__init__(error_type="INVALID_DATA", message=message, details=details)


class StepFailedError(IronError):
    """Inner resolvent solve exhausted its iterations above the residual target."""

    def __init__(self, best_x: np.ndarray, residual_norm: float, step: int | None = None):
        self.best_x = np.array(best_x, copy=True)
        self.residual_norm = float(residual_norm)
        self.step = step
        where = f" at step {step}" if step is not None else ""
        super().__init__(
            error_type="STEP_FAILED",
            message=f"Inner resolvent solve did not reach the residual target{where}",
            details=f"best residual norm {self.residual_norm:.3e}",
            is_retryable=True,
        )


class UnstableDynamicsError(IronError):
    """Fixed-gamma quadratic recursion has spectral radius >= 1 in some direction."""

    def __init__(self, eigenvalue: float, alpha: float, spectral_radius: float):
        self.eigenvalue = float(eigenvalue)
        self.alpha = float(alpha)
        self.spectral_radius = float(spectral_radius)
        super().__init__(
            error_type="UNSTABLE_DYNAMICS",
            message=f"Recursion unstable for eigenvalue a={self.eigenvalue:.6g} at alpha={self.alpha:.6g}",
            details=f"spectral radius {self.spectral_radius:.6g} >= 1",
        )


class NumericalDegeneracyError(IronError):
    """Moment system for the stationary covariance is singular."""

    def __init__(self, message: str, details: str = ""):
        super().__init__(error_type="NUMERICAL_DEGENERACY", message=message, details=details)


class NonDecouplingNoiseError(IronError):
    """Noise covariance does not commute with the quadratic's Hessian."""

    def __init__(self, commutator_norm: float):
        self.commutator_norm = float(commutator_norm)
        super().__init__(
            error_type="NON_DECOUPLING_NOISE",
            message="Exact analysis needs a noise covariance that commutes with A",
            details=f"||A Sigma - Sigma A||_F = {self.commutator_norm:.3e}",
        )


class ReferenceMinimizerError(IronError):
    """Full-batch Newton did not reach the gradient tolerance."""

    def __init__(self, grad_norm: float, iterations: int, context: dict[str, Any] | None = None):
        self.grad_norm = float(grad_norm)
        self.iterations = int(iterations)
        self.context = context or {}
        super().__init__(
            error_type="REFERENCE_MINIMIZER",
            message=f"Reference minimizer did not converge in {iterations} Newton steps",
            details=f"final gradient norm {self.grad_norm:.3e}",
        )
