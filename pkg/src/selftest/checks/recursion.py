"""Scalar quadratic runs of the outer step against the eigendirection recursion."""
from __future__ import annotations

import numpy as np

from iron.core import outer_step
from iron.noise import NoiseModel
from iron.rng import step_generator
from iron.state import IronState
from models.config import InnerConfig
from models.shared import GammaMode
from objectives.quadratic import Quadratic
from quad_exact.recursion import eigen_recursion
from selftest.models import CheckResult

N_STEPS = 40


def check_recursion_matches_step(rng: np.random.Generator, n_instances: int) -> CheckResult:
    """Fixed-gamma outer steps reproduce (e, w)+ = M (e, w) + g sqrt(q) eta draw for draw."""
    cfg = InnerConfig()
    worst = 0.0
    for _ in range(n_instances):
        while True:
            a = 10.0 ** rng.uniform(-1, 1)
            mu = min(a, 10.0 ** rng.uniform(-1, 0))
            gamma = mu * 10.0 ** rng.uniform(-0.3, 0.3)
            alpha = 10.0 ** rng.uniform(0, 2.5)
            rho = 10.0 ** rng.uniform(-2, 0)
            rec = eigen_recursion(a, alpha, gamma, mu, rho)
            if rec.stable:
                break
        seed = int(rng.integers(2**31))
        b = rng.standard_normal()
        quad = Quadratic(np.array([[a]]), np.array([b]))
        noise = NoiseModel.isotropic(rho, seed=seed)
        x_star = b / a

        x0, v0 = rng.standard_normal(2)
        state = IronState.initial(np.array([x0]), gamma, v0=np.array([v0]))
        xs = [state.x[0]]
        vs = [state.v[0]]
        for _ in range(N_STEPS):
            state, _ = outer_step(state, quad, alpha, noise, cfg, mu=mu, gamma_mode=GammaMode.FIXED)
            xs.append(state.x[0])
            vs.append(state.v[0])

        etas = np.array([step_generator(seed, 0, k).standard_normal(1)[0] for k in range(N_STEPS)])
        expected = rec.simulate(x0 - x_star, v0 - x_star, etas)
        observed = np.column_stack([np.array(xs) - x_star, np.array(vs) - x_star])
        worst = max(worst, float(np.max(np.abs(observed - expected)) / max(1.0, np.max(np.abs(expected)))))
    threshold = 1e-9
    return CheckResult(
        name="recursion_matches_step",
        passed=bool(worst <= threshold),
        instances=n_instances,
        worst=worst,
        threshold=threshold,
    )
