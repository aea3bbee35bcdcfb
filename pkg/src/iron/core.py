"""Outer iteration: inertial center, center noise, resolvent step, (v, gamma) updates."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import structlog

from exceptions import StepFailedError
from inner.closed_form import prox_quadratic_closed_form
from inner.solver import InnerResult, residual, residual_error_bound, solve_prox
from iron.noise import NoiseModel, sample_center_noise
from iron.params import damping_update, step_params, velocity_update
from iron.rng import step_generator
from iron.schedules import Schedule, resolve_schedule
from iron.state import IronState, StepReport
from models.config import InnerConfig
from models.shared import GammaMode, WarmStart
from objectives.base import Objective
from objectives.quadratic import Quadratic

logger = structlog.get_logger(__name__)


def outer_step(
    state: IronState,
    obj: Objective,
    alpha: float,
    noise: NoiseModel,
    inner_cfg: InnerConfig | None = None,
    rng: np.random.Generator | None = None,
    *,
    mu: float | None = None,
    gamma_mode: GammaMode = GammaMode.UPDATED,
    strict: bool = False,
) -> tuple[IronState, StepReport]:
    """One implicit step x+ = prox_{lam f}(c + xi).

    Args:
        mu: dynamics mu used in tau and the gamma update; defaults to obj.mu
        rng: generator for this step; defaults to the (noise.seed, 0, k) stream
        strict: raise StepFailedError instead of flagging the report

    Raises:
        StepFailedError: strict and the inner solve missed its tolerance
    """
    cfg = inner_cfg or InnerConfig()
    mu_dyn = obj.mu if mu is None else mu
    params = step_params(alpha, state.gamma, mu_dyn, state.x, state.v)
    rng = rng if rng is not None else step_generator(noise.seed, 0, state.k)
    z = params.center + sample_center_noise(noise, params, rng)

    if isinstance(obj, Quadratic) and cfg.quadratic_closed_form:
        x_exact = prox_quadratic_closed_form(obj, params.lam, z)
        r_norm = float(np.linalg.norm(residual(obj, params.lam, z, x_exact)))
        result = InnerResult(
            x=x_exact,
            residual_norm=r_norm,
            iters=1,
            cg_iters_total=0,
            converged=True,
            error_bound=residual_error_bound(r_norm, params.lam, obj.mu),
        )
    else:
        u0 = state.x if cfg.warm_start == WarmStart.PREVIOUS_X else z
        result = solve_prox(obj, params.lam, z, u0, cfg)

    if not result.converged:
        if strict:
            raise StepFailedError(result.x, result.residual_norm, step=state.k)
        logger.warning(
            "outer_step_failed",
            k=state.k,
            alpha=params.alpha,
            residual=result.residual_norm,
            tolerance=cfg.residual_tol,
        )

    x_new = result.x
    gamma_new = damping_update(state.gamma, params.alpha, mu_dyn) if gamma_mode == GammaMode.UPDATED else state.gamma
    new_state = IronState(
        x=x_new,
        v=velocity_update(x_new, state.x, params.alpha),
        gamma=gamma_new,
        k=state.k + 1,
    )
    report = StepReport(
        k=state.k,
        alpha=params.alpha,
        lam=params.lam,
        inner_iters=result.iters,
        residual_norm=result.residual_norm,
        error_bound=result.error_bound,
        cg_iters=result.cg_iters_total,
        converged=result.converged,
        fallback_used=result.fallback_used,
        failed=not result.converged,
    )
    return new_state, report


@dataclass
class Trajectory:
    """States x_0..x_n (n + 1 entries) and one report per step."""
    states: list[IronState]
    reports: list[StepReport] = field(default_factory=list)

    @property
    def positions(self) -> np.ndarray:
        return np.stack([s.x for s in self.states])

    @property
    def gammas(self) -> np.ndarray:
        return np.array([s.gamma for s in self.states])

    @property
    def inner_iters(self) -> np.ndarray:
        return np.array([r.inner_iters for r in self.reports], dtype=int)

    @property
    def failed_steps(self) -> int:
        return sum(1 for r in self.reports if r.failed)

    @property
    def final(self) -> IronState:
        return self.states[-1]


def run_trajectory(
    state0: IronState,
    obj: Objective,
    schedule: Schedule,
    noise: NoiseModel,
    inner_cfg: InnerConfig | None,
    n_steps: int,
    *,
    mu: float | None = None,
    gamma_mode: GammaMode = GammaMode.UPDATED,
    particle: int = 0,
    strict: bool = False,
) -> Trajectory:
    """Run n_steps outer steps with alphas from ``schedule``.

    Step k draws from the (noise.seed, particle, k) stream, so a trajectory
    is a deterministic function of its arguments.
    """
    alphas = resolve_schedule(schedule, n_steps)
    traj = Trajectory(states=[state0])
    state = state0
    for alpha in alphas:
        rng = step_generator(noise.seed, particle, state.k)
        state, report = outer_step(
            state, obj, alpha, noise, inner_cfg, rng, mu=mu, gamma_mode=gamma_mode, strict=strict
        )
        traj.states.append(state)
        traj.reports.append(report)
    if traj.failed_steps:
        logger.info("trajectory_failed_steps", particle=particle, failed=traj.failed_steps, n_steps=n_steps)
    return traj
