"""Diffusion noise model and the center perturbation it induces."""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from exceptions import ConfigurationError, InvalidInputError
from iron.params import StepParams
from models.config import NoiseConfig
from models.shared import NoiseKind


@dataclass(frozen=True)
class NoiseModel:
    """Isotropic rho*I or a general square-root factor Sigma^{1/2}.

    ``seed`` is the master seed of every random stream driven by this model.
    """
    kind: NoiseKind
    rho: float = 0.0
    sigma_sqrt: np.ndarray | None = None
    seed: int = 0

    @classmethod
    def isotropic(cls, rho: float, seed: int = 0) -> NoiseModel:
        if rho < 0:
            raise InvalidInputError(f"rho must be >= 0, got {rho}")
        return cls(kind=NoiseKind.ISOTROPIC, rho=float(rho), seed=int(seed))

    @classmethod
    def general(cls, sigma_sqrt: np.ndarray, seed: int = 0) -> NoiseModel:
        s = np.array(sigma_sqrt, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise InvalidInputError(f"sigma_sqrt must be square, got shape {s.shape}")
        s.setflags(write=False)
        return cls(kind=NoiseKind.GENERAL, sigma_sqrt=s, seed=int(seed))

    @classmethod
    def from_config(cls, cfg: NoiseConfig, rho_default: float) -> NoiseModel:
        if cfg.kind == NoiseKind.ISOTROPIC:
            return cls.isotropic(cfg.rho if cfg.rho is not None else rho_default, seed=cfg.seed)
        if cfg.sigma_sqrt is not None:
            return cls.general(np.asarray(cfg.sigma_sqrt), seed=cfg.seed)
        path = Path(cfg.sigma_sqrt_path or "")
        if not path.exists():
            raise ConfigurationError(f"sigma_sqrt_path not found: {path}")
        return cls.general(np.loadtxt(path, delimiter=",", ndmin=2), seed=cfg.seed)

    def factor(self, dim: int) -> np.ndarray:
        if self.kind == NoiseKind.ISOTROPIC:
            return self.rho * np.eye(dim)
        self._check_dim(dim)
        return np.array(self.sigma_sqrt)

    def covariance(self, dim: int) -> np.ndarray:
        s = self.factor(dim)
        return s @ s.T

    def trace_sigma(self, dim: int) -> float:
        """Variance proxy sigma^2 = tr(Sigma); n rho^2 when isotropic."""
        if self.kind == NoiseKind.ISOTROPIC:
            return dim * self.rho**2
        self._check_dim(dim)
        return float(np.sum(self.sigma_sqrt**2))

    @property
    def is_zero(self) -> bool:
        if self.kind == NoiseKind.ISOTROPIC:
            return self.rho == 0.0
        return not np.any(self.sigma_sqrt)

    def apply(self, eta: np.ndarray) -> np.ndarray:
        """Sigma^{1/2} eta for a vector or for each row of a batch."""
        if self.kind == NoiseKind.ISOTROPIC:
            return self.rho * eta
        self._check_dim(eta.shape[-1])
        return eta @ self.sigma_sqrt.T

    def _check_dim(self, dim: int) -> None:
        if self.sigma_sqrt is not None and self.sigma_sqrt.shape[0] != dim:
            raise InvalidInputError(
                f"sigma_sqrt is {self.sigma_sqrt.shape[0]}x{self.sigma_sqrt.shape[0]}, objective dim is {dim}"
            )


def center_noise_scale(alpha: float, tau: float) -> float:
    return math.sqrt(alpha) / (1.0 + tau)


def sample_center_noise(model: NoiseModel, params: StepParams, rng: np.random.Generator) -> np.ndarray:
    """xi = sqrt(alpha)/(1+tau) Sigma^{1/2} eta with eta ~ N(0, I).

    eta is drawn even when the model is zero so that streams stay aligned
    across noise levels.
    """
    eta = rng.standard_normal(params.center.shape[-1])
    return center_noise_scale(params.alpha, params.tau) * model.apply(eta)
