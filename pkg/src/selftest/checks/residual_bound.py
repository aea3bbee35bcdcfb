"""Certified residual-to-error bound of the inner solve."""
from __future__ import annotations

import numpy as np

from inner.closed_form import prox_quadratic_closed_form
from inner.solver import residual, solve_prox
from models.config import InnerConfig
from objectives.base import Objective
from objectives.data import convex_log_cosh, synthetic_logistic
from objectives.quadratic import Quadratic
from selftest.checks.instances import random_quadratic
from selftest.models import CheckResult

_REFERENCE = InnerConfig(residual_tol=1e-13, max_iters=100)


def _exact_prox(obj: Objective, lam: float, c: np.ndarray) -> np.ndarray:
    if isinstance(obj, Quadratic):
        return prox_quadratic_closed_form(obj, lam, c)
    return solve_prox(obj, lam, c, c, _REFERENCE).x


def check_residual_bound(rng: np.random.Generator, n_instances: int) -> CheckResult:
    """||u - prox(c)|| <= ||g(u)|| / (1 + lam mu) at arbitrary u.

    Cycles through random quadratics, a ridge-logistic problem and a convex
    log-cosh instance (mu = 0, so the bound is ||g(u)|| itself).
    """
    logistic, _ = synthetic_logistic(dim=5, n_samples=60, lambda_reg=0.1, seed=int(rng.integers(2**31)))
    logcosh = convex_log_cosh(5, 3, seed=int(rng.integers(2**31)))
    worst = -np.inf
    for i in range(n_instances):
        obj: Objective = (random_quadratic(rng), logistic, logcosh)[i % 3]
        lam = 10.0 ** rng.uniform(-2, 1)
        c = rng.standard_normal(obj.dim)
        x = _exact_prox(obj, lam, c)
        u = x + 10.0 ** rng.uniform(-4, 0) * rng.standard_normal(obj.dim)
        bound = np.linalg.norm(residual(obj, lam, c, u)) / (1.0 + lam * obj.mu)
        worst = max(worst, float(np.linalg.norm(u - x) - bound))
    threshold = 1e-10
    return CheckResult(
        name="residual_bound",
        passed=bool(worst <= threshold),
        instances=n_instances,
        worst=worst,
        threshold=threshold,
    )
