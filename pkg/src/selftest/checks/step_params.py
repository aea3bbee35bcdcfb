"""Hand-evaluated step parameters and damping update."""
from __future__ import annotations

import numpy as np

from iron.params import center_offset_form, damping_update, step_params
from selftest.models import CheckResult


def check_step_params(rng: np.random.Generator, n_instances: int) -> CheckResult:
    """tau = 2, lam = 1/3 at alpha = gamma = mu = 1; both center forms agree; gamma approaches mu."""
    x = np.array([1.0, -2.0])
    p = step_params(1.0, 1.0, 1.0, x, x)
    worst = max(abs(p.tau - 2.0), abs(p.lam - 1.0 / 3.0), float(np.max(np.abs(p.center - x))))

    for _ in range(n_instances):
        alpha = 1.0 + 100.0 * rng.random()
        gamma, mu = 0.1 + 5.0 * rng.random(2)
        x, v = rng.standard_normal((2, 4))
        p = step_params(alpha, gamma, mu, x, v)
        expected_lam = alpha / (gamma * (1.0 + 1.0 / alpha + mu / gamma))
        alt = center_offset_form(x, v, p.tau)
        worst = max(
            worst,
            abs(p.lam - expected_lam) / expected_lam,
            float(np.linalg.norm(p.center - alt) / max(np.linalg.norm(alt), 1e-300)),
        )
        if abs(damping_update(gamma, alpha, mu) - mu) > abs(gamma - mu):
            worst = max(worst, 1.0)

    threshold = 1e-14
    return CheckResult(
        name="step_params",
        passed=bool(worst <= threshold),
        instances=n_instances + 1,
        worst=worst,
        threshold=threshold,
    )
