"""Bias/variance identity on random particle clouds."""
from __future__ import annotations

import numpy as np

from experiments.metrics import mse_decomposition
from selftest.models import CheckResult


def check_mse_decomposition(rng: np.random.Generator, n_instances: int) -> CheckResult:
    """mse == bias_sq + cov_trace to 1e-12 relative."""
    worst = 0.0
    for _ in range(n_instances):
        n_particles = int(rng.integers(2, 500))
        dim = int(rng.integers(1, 20))
        x_star = rng.standard_normal(dim)
        positions = x_star + rng.uniform(-2, 2, dim) + 10.0 ** rng.uniform(-3, 1) * rng.standard_normal((n_particles, dim))
        mse, bias_sq, cov_trace = mse_decomposition(positions, x_star)
        worst = max(worst, abs(mse - bias_sq - cov_trace) / max(mse, 1e-300))
    threshold = 1e-12
    return CheckResult(
        name="mse_decomposition",
        passed=bool(worst <= threshold),
        instances=n_instances,
        worst=worst,
        threshold=threshold,
    )
