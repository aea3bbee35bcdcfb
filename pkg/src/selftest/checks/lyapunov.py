"""Moment-system Lyapunov solve against its residual and the fixed-point iteration."""
from __future__ import annotations

import math

import numpy as np

from quad_exact.lyapunov import iterate_lyapunov, lyapunov_residual, lyapunov_solve
from quad_exact.recursion import eigen_recursion
from selftest.models import CheckResult

_MAX_RADIUS = 0.99


def _random_stable_recursion(rng: np.random.Generator):
    while True:
        mu = 10.0 ** rng.uniform(-1, 0)
        rec = eigen_recursion(
            a=mu * 10.0 ** rng.uniform(0, 1),
            alpha=10.0 ** rng.uniform(0, 3),
            gamma=mu * 10.0 ** rng.uniform(-0.3, 0.3),
            mu=mu,
            rho=10.0 ** rng.uniform(-2, 0),
        )
        if rec.spectral_radius <= _MAX_RADIUS:
            return rec


def check_lyapunov(rng: np.random.Generator, n_instances: int) -> CheckResult:
    """Relative residual and agreement with P <- M P M^T + Q both within 1e-10."""
    worst_residual = worst_gap = 0.0
    for _ in range(n_instances):
        rec = _random_stable_recursion(rng)
        cov = lyapunov_solve(rec)
        p = cov.P
        q = rec.Q
        scale = max(np.linalg.norm(p), np.linalg.norm(q))
        worst_residual = max(worst_residual, lyapunov_residual(rec.M, q, p) / scale)
        # twice the plain count covers a near-defective M
        n_iter = 2 * math.ceil(math.log(1e-16) / math.log(max(cov.spectral_radius, 1e-3) ** 2)) + 10
        p_iter = iterate_lyapunov(rec.M, q, n_iter)
        worst_gap = max(worst_gap, float(np.linalg.norm(p - p_iter) / np.linalg.norm(p)))

    threshold = 1e-10
    ok = worst_residual <= threshold and worst_gap <= threshold
    return CheckResult(
        name="lyapunov",
        passed=bool(ok),
        instances=n_instances,
        worst=max(worst_residual, worst_gap),
        threshold=threshold,
        detail=f"residual={worst_residual:.2e} fixed_point_gap={worst_gap:.2e}",
    )
