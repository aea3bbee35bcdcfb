"""Optimizer state and per-step reports."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from exceptions import InvalidInputError


@dataclass(frozen=True)
class IronState:
    """Position x, lifted velocity v, damping gamma and iteration index k."""
    x: np.ndarray
    v: np.ndarray
    gamma: float
    k: int = 0

    def __post_init__(self) -> None:
        if np.shape(self.x) != np.shape(self.v):
            raise InvalidInputError(f"IronState: x {np.shape(self.x)} and v {np.shape(self.v)} differ")
        if not self.gamma > 0:
            raise InvalidInputError(f"IronState: gamma must be > 0, got {self.gamma}")
        if self.k < 0:
            raise InvalidInputError(f"IronState: k must be >= 0, got {self.k}")

    @classmethod
    def initial(cls, x0: np.ndarray, gamma0: float, v0: np.ndarray | None = None) -> IronState:
        """Start at rest (v0 = x0, zero physical velocity) unless v0 is given."""
        x = np.array(x0, dtype=float)
        v = x.copy() if v0 is None else np.array(v0, dtype=float)
        return cls(x=x, v=v, gamma=float(gamma0), k=0)

    @property
    def physical_velocity(self) -> np.ndarray:
        return self.v - self.x


@dataclass(frozen=True)
class StepReport:
    """Inner-solve accounting for one outer step.

    ``failed`` marks a step that kept the best inner iterate without reaching
    the residual tolerance.
    """
    k: int
    alpha: float
    lam: float
    inner_iters: int
    residual_norm: float
    error_bound: float
    cg_iters: int = 0
    converged: bool = True
    fallback_used: bool = False
    failed: bool = False
