from __future__ import annotations

import sys
from pathlib import Path

# Add src directory to path immediately on import - MUST be before any other imports
_src_dir = Path(__file__).resolve().parents[1] / "src"
_src_str = str(_src_dir)
if _src_str not in sys.path:
    sys.path.insert(0, _src_str)

import numpy as np
import pytest

from iron.noise import NoiseModel
from models.config import InnerConfig
from objectives.data import planted_log_cosh, synthetic_logistic
from objectives.quadratic import Quadratic

REPO_ROOT = Path(__file__).resolve().parents[1]
EXPERIMENTS_DIR = REPO_ROOT / "config" / "experiments"


@pytest.fixture
def experiments_dir() -> Path:
    """Shipped experiment files."""
    return EXPERIMENTS_DIR


def pytest_configure(config: pytest.Config) -> None:
    """Ensure src directory is on sys.path so tests can import modules."""
    src_dir = Path(__file__).resolve().parents[1] / "src"
    src_str = str(src_dir)
    if src_str not in sys.path:
        sys.path.insert(0, src_str)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def rotated_quad() -> Quadratic:
    """A = Q^T diag(1, 1, 3) Q with the default rotation and b = 1."""
    return Quadratic.random_rotated([1.0, 1.0, 3.0], seed=7, b_scale=1.0)


@pytest.fixture
def diag_quad() -> Quadratic:
    return Quadratic(np.diag([1.0, 1.0, 3.0]), np.zeros(3))


@pytest.fixture
def small_logistic():
    """Ridge logistic with d=5, n=80, lambda_reg=0.1 and its true weights."""
    return synthetic_logistic(dim=5, n_samples=80, lambda_reg=0.1, seed=11)


@pytest.fixture
def planted_logcosh():
    """Few rows: Q is ill conditioned and the Hessian is indefinite away from x0."""
    return planted_log_cosh(m=5, n=3, seed=3)


@pytest.fixture
def conditioned_logcosh():
    """m = 20 rows: the Hessian is positive definite near the planted point."""
    return planted_log_cosh(m=20, n=3, seed=3)


@pytest.fixture
def tight_inner() -> InnerConfig:
    return InnerConfig(residual_tol=1e-12, max_iters=100)


@pytest.fixture
def no_noise() -> NoiseModel:
    return NoiseModel.isotropic(0.0, seed=0)
