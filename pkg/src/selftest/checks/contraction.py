"""Resolvent contraction on random quadratics."""
from __future__ import annotations

import numpy as np

from inner.closed_form import prox_quadratic_closed_form
from objectives.quadratic import Quadratic
from selftest.checks.instances import random_quadratic
from selftest.models import CheckResult


def check_resolvent_contraction(rng: np.random.Generator, n_instances: int) -> CheckResult:
    """||prox(u) - prox(v)|| <= ||u - v|| / (1 + lam mu) + 1e-12."""
    worst = -np.inf
    for _ in range(n_instances):
        quad: Quadratic = random_quadratic(rng)
        lam = 10.0 ** rng.uniform(-2, 2)
        u, v = rng.standard_normal((2, quad.dim)) * 3.0
        lhs = np.linalg.norm(prox_quadratic_closed_form(quad, lam, u) - prox_quadratic_closed_form(quad, lam, v))
        rhs = np.linalg.norm(u - v) / (1.0 + lam * quad.mu)
        worst = max(worst, float(lhs - rhs))
    threshold = 1e-12
    return CheckResult(
        name="resolvent_contraction",
        passed=bool(worst <= threshold),
        instances=n_instances,
        worst=worst,
        threshold=threshold,
    )
