"""Seeded synthetic data for the logistic and log-cosh benchmarks."""
from __future__ import annotations

import numpy as np
import structlog
from scipy.special import expit

from objectives.log_cosh import LogCosh, log_cosh
from objectives.ridge_logistic import RidgeLogistic

logger = structlog.get_logger(__name__)


def synthetic_logistic(
    dim: int, n_samples: int, lambda_reg: float, seed: int
) -> tuple[RidgeLogistic, np.ndarray]:
    """Standard-normal features with labels drawn from the logistic model.

    Returns:
        (objective, w_true). w_true is a fixed unit-scale weight vector
        determined by ``seed`` alone.
    """
    seq = np.random.SeedSequence(seed)
    feature_seq, weight_seq = seq.spawn(2)
    w_true = np.random.default_rng(weight_seq).standard_normal(dim) / np.sqrt(dim)
    rng = np.random.default_rng(feature_seq)
    features = rng.standard_normal((n_samples, dim))
    p_pos = expit(features @ w_true)
    labels = np.where(rng.random(n_samples) < p_pos, 1.0, -1.0)
    logger.debug(
        "synthetic_logistic_generated",
        dim=dim,
        n_samples=n_samples,
        positive_fraction=float(np.mean(labels > 0)),
    )
    return RidgeLogistic(features, labels, lambda_reg), w_true


def planted_log_cosh(m: int, n: int, seed: int) -> tuple[LogCosh, np.ndarray]:
    """A with i.i.d. N(0,1) entries, planted x0 in {-1,+1}^n, b = A u(x0).

    x0 (and -x0, since u is even) is a global minimizer with f = 0.
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    x0 = rng.choice(np.array([-1.0, 1.0]), size=n)
    b = A @ log_cosh(x0)
    return LogCosh(A, b), x0


def convex_log_cosh(m: int, n: int, seed: int) -> LogCosh:
    """Convex instance: A >= 0 entrywise and b <= 0 keep A u(x) - b >= 0.

    Each residual component is then a nonnegative convex function, so f is
    convex (mu = 0) and g(u) = u - c + lam grad f(u) is 1-strongly monotone.
    """
    rng = np.random.default_rng(seed)
    A = np.abs(rng.standard_normal((m, n)))
    b = -np.abs(rng.standard_normal(m))
    return LogCosh(A, b)
