"""One Newton step solves the quadratic resolvent exactly."""
from __future__ import annotations

import numpy as np

from inner.closed_form import prox_quadratic_closed_form
from inner.solver import solve_prox
from models.config import InnerConfig
from selftest.checks.instances import random_quadratic
from selftest.models import CheckResult


def check_newton_exact(rng: np.random.Generator, n_instances: int) -> CheckResult:
    cfg = InnerConfig(residual_tol=1e-10)
    worst = 0.0
    extra_steps = 0
    for _ in range(n_instances):
        quad = random_quadratic(rng)
        lam = 10.0 ** rng.uniform(-2, 1)
        c = 3.0 * rng.standard_normal(quad.dim)
        result = solve_prox(quad, lam, c, c + rng.standard_normal(quad.dim), cfg)
        exact = prox_quadratic_closed_form(quad, lam, c)
        extra_steps += int(result.iters != 1 or not result.converged)
        worst = max(worst, float(np.linalg.norm(result.x - exact) / (1.0 + np.linalg.norm(exact))))
    threshold = 1e-10
    return CheckResult(
        name="newton_exact",
        passed=bool(extra_steps == 0 and worst <= threshold),
        instances=n_instances,
        worst=worst,
        threshold=threshold,
        detail=f"instances needing more than one step: {extra_steps}",
    )
