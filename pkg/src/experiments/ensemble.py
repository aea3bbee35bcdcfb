"""Monte Carlo ensembles of independent IRON_FI particles."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
import structlog

from exceptions import ConfigurationError
from experiments.metrics import mse_decomposition, stationary_average
from inner.closed_form import prox_quadratic_batch
from inner.solver import solve_prox_batch
from iron.core import Trajectory, run_trajectory
from iron.noise import NoiseModel, center_noise_scale
from iron.params import damping_update, step_params, velocity_update
from iron.rng import block_ranges, init_generator, step_generator
from iron.state import IronState
from models.config import EnsembleConfig, InitSpec, InnerConfig
from models.shared import Curvature, GammaMode, InitKind, LinearSolveKind, WarmStart
from objectives.base import Objective
from objectives.quadratic import Quadratic

logger = structlog.get_logger(__name__)


@dataclass
class EnsembleStats:
    """Per-iteration summaries (n_steps + 1 entries, the initial cloud included).

    mse and bias_sq are nan when no minimizer is known; cov_trace is always
    available. stationary_se is the standard error of the stationary MSE
    over per-particle time averages (nan for a single particle).
    """
    alpha: float
    seed: int
    n_particles: int
    burn_in_fraction: float
    mse: np.ndarray
    bias_sq: np.ndarray
    cov_trace: np.ndarray
    gamma: np.ndarray
    mean_inner_iters: np.ndarray
    failed_steps: int
    stationary_mse: float
    stationary_se: float
    stationary_cov_trace: float
    stationary_inner_iters: float
    snapshots: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def n_steps(self) -> int:
        return self.mse.size - 1

    @property
    def has_minimizer(self) -> bool:
        return bool(np.isfinite(self.stationary_mse))

    @property
    def scaled_mse(self) -> float:
        return self.alpha * self.stationary_mse

    @property
    def scaled_se(self) -> float:
        return self.alpha * self.stationary_se


def initial_cloud(
    init: InitSpec,
    n_particles: int,
    dim: int,
    seed: int,
    block_size: int,
    default_x0: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Initial (X0, V0), each (n_particles, dim). Particles start at rest unless v0 is set."""

    def vec(values: list[float] | None, name: str) -> np.ndarray:
        if values is None:
            return np.array(default_x0, dtype=float)
        arr = np.asarray(values, dtype=float)
        if arr.shape != (dim,):
            raise ConfigurationError(f"init.{name} has {arr.size} entries, objective dim is {dim}")
        return arr

    if init.kind == InitKind.POINT:
        x0 = vec(init.x0, "x0")
        X0 = np.tile(x0, (n_particles, 1))
        V0 = np.tile(vec(init.v0, "v0") if init.v0 is not None else x0, (n_particles, 1))
        return X0, V0

    center = vec(init.center, "center")
    X0 = np.empty((n_particles, dim))
    for block, start, stop in block_ranges(n_particles, block_size):
        X0[start:stop] = center + init.radius * init_generator(seed, block).standard_normal((stop - start, dim))
    return X0, X0.copy()


class _Recorder:
    """Accumulates per-step decompositions and per-particle stationary sums."""

    def __init__(self, n_steps: int, n_particles: int, burn_in: int, x_star: np.ndarray | None, snapshot_steps: Sequence[int]):
        length = n_steps + 1
        self.mse = np.full(length, np.nan)
        self.bias_sq = np.full(length, np.nan)
        self.cov_trace = np.zeros(length)
        self.burn_in = burn_in
        self.x_star = x_star
        self.particle_sums = np.zeros(n_particles)
        self.count = 0
        self.snapshot_steps = {k if k >= 0 else length + k for k in snapshot_steps}
        self.snapshots: dict[int, np.ndarray] = {}

    def record(self, k: int, positions: np.ndarray) -> None:
        self.mse[k], self.bias_sq[k], self.cov_trace[k] = mse_decomposition(positions, self.x_star)
        if self.x_star is not None and k >= self.burn_in:
            err = positions - self.x_star
            self.particle_sums += np.sum(err * err, axis=1)
            self.count += 1
        if k in self.snapshot_steps:
            self.snapshots[k] = positions.copy()

    def standard_error(self) -> float:
        n = self.particle_sums.size
        if self.x_star is None or n < 2 or self.count == 0:
            return float("nan")
        per_particle = self.particle_sums / self.count
        return float(np.std(per_particle, ddof=1) / math.sqrt(n))


def run_ensemble(
    cfg: EnsembleConfig,
    obj: Objective,
    gamma_mode: GammaMode,
    gamma0: float | None,
    noise: NoiseModel,
    inner_cfg: InnerConfig | None,
    alpha: float,
    *,
    x_star: np.ndarray | None = None,
    mu: float | None = None,
    seed: int | None = None,
    threads: int = 1,
    snapshot_steps: Sequence[int] = (),
    default_x0: np.ndarray | None = None,
) -> EnsembleStats:
    """Simulate cfg.n_particles independent particles for cfg.n_steps at fixed alpha.

    Quadratics with the closed-form resolvent advance the whole cloud at
    once, drawing noise per particle block. Vectorized objectives with an
    exact dense Jacobian do the same with solve_prox_batch. Every other
    objective runs one trajectory per particle on a thread pool. With
    particle_block_size = 1 all three paths draw from the same
    (seed, particle, step) streams, and none depends on the thread count.

    Args:
        gamma0: initial damping; defaults to the dynamics mu
        seed: master seed; defaults to noise.seed
        snapshot_steps: steps whose full cloud is kept (negative counts from the end)
        default_x0: init point or ball center when the config gives none;
            defaults to x_star + 1, or 0 without a minimizer
    """
    inner_cfg = inner_cfg or InnerConfig()
    master = noise.seed if seed is None else int(seed)
    mu_dyn = obj.mu if mu is None else mu
    gamma_start = mu_dyn if gamma0 is None else gamma0
    if default_x0 is None:
        default_x0 = x_star + 1.0 if x_star is not None else np.zeros(obj.dim)
    X0, V0 = initial_cloud(cfg.init, cfg.n_particles, obj.dim, master, cfg.particle_block_size, default_x0)
    rec = _Recorder(cfg.n_steps, cfg.n_particles, cfg.burn_in_steps, x_star, snapshot_steps)

    if isinstance(obj, Quadratic) and inner_cfg.quadratic_closed_form:
        gammas = _run_quadratic_cloud(cfg, obj, gamma_mode, gamma_start, mu_dyn, noise, alpha, master, X0, V0, rec)
        mean_iters = np.ones(cfg.n_steps)
        failed = 0
    elif _batchable(obj, inner_cfg):
        gammas, mean_iters, failed = _run_batched_cloud(
            cfg, obj, gamma_mode, gamma_start, mu_dyn, noise, inner_cfg, alpha, master, X0, V0, rec
        )
    else:
        seeded = replace(noise, seed=master)

        def run_one(i: int) -> Trajectory:
            state0 = IronState(x=X0[i], v=V0[i], gamma=gamma_start)
            return run_trajectory(
                state0, obj, alpha, seeded, inner_cfg, cfg.n_steps, mu=mu_dyn, gamma_mode=gamma_mode, particle=i
            )

        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            trajectories = list(pool.map(run_one, range(cfg.n_particles)))
        positions = np.stack([t.positions for t in trajectories], axis=1)
        for k in range(cfg.n_steps + 1):
            rec.record(k, positions[k])
        mean_iters = (
            np.stack([t.inner_iters for t in trajectories], axis=1).mean(axis=1)
            if cfg.n_steps
            else np.zeros(0)
        )
        failed = sum(t.failed_steps for t in trajectories)
        gammas = trajectories[0].gammas

    has_min = x_star is not None
    stats = EnsembleStats(
        alpha=float(alpha),
        seed=master,
        n_particles=cfg.n_particles,
        burn_in_fraction=cfg.burn_in_fraction,
        mse=rec.mse,
        bias_sq=rec.bias_sq,
        cov_trace=rec.cov_trace,
        gamma=gammas,
        mean_inner_iters=mean_iters,
        failed_steps=failed,
        stationary_mse=stationary_average(rec.mse, cfg.burn_in_fraction) if has_min else float("nan"),
        stationary_se=rec.standard_error(),
        stationary_cov_trace=stationary_average(rec.cov_trace, cfg.burn_in_fraction),
        stationary_inner_iters=float(np.mean(mean_iters[max(cfg.burn_in_steps - 1, 0):])) if mean_iters.size else 0.0,
        snapshots=rec.snapshots,
    )
    logger.info(
        "ensemble_done",
        alpha=stats.alpha,
        seed=master,
        n_particles=cfg.n_particles,
        stationary_mse=stats.stationary_mse,
        stationary_cov_trace=stats.stationary_cov_trace,
        failed_steps=failed,
    )
    return stats


def _run_quadratic_cloud(
    cfg: EnsembleConfig,
    quad: Quadratic,
    gamma_mode: GammaMode,
    gamma: float,
    mu: float,
    noise: NoiseModel,
    alpha: float,
    master: int,
    X: np.ndarray,
    V: np.ndarray,
    rec: _Recorder,
) -> np.ndarray:
    """Closed-form cloud update; returns the gamma series."""
    blocks = block_ranges(cfg.n_particles, cfg.particle_block_size)
    gammas = np.empty(cfg.n_steps + 1)
    gammas[0] = gamma
    rec.record(0, X)
    eta = np.empty_like(X)
    for k in range(cfg.n_steps):
        params = step_params(alpha, gamma, mu, X, V)
        for block, start, stop in blocks:
            eta[start:stop] = step_generator(master, block, k).standard_normal((stop - start, quad.dim))
        Z = params.center + center_noise_scale(params.alpha, params.tau) * noise.apply(eta)
        X_new = prox_quadratic_batch(quad, params.lam, Z)
        V = velocity_update(X_new, X, params.alpha)
        X = X_new
        if gamma_mode == GammaMode.UPDATED:
            gamma = damping_update(gamma, params.alpha, mu)
        gammas[k + 1] = gamma
        rec.record(k + 1, X)
    return gammas


def _batchable(obj: Objective, inner_cfg: InnerConfig) -> bool:
    return (
        obj.vectorized
        and inner_cfg.batched
        and inner_cfg.curvature == Curvature.EXACT
        and inner_cfg.linear_solve.kind != LinearSolveKind.CG
        and obj.dim <= inner_cfg.linear_solve.direct_max_dim
    )


def _run_batched_cloud(
    cfg: EnsembleConfig,
    obj: Objective,
    gamma_mode: GammaMode,
    gamma: float,
    mu: float,
    noise: NoiseModel,
    inner_cfg: InnerConfig,
    alpha: float,
    master: int,
    X: np.ndarray,
    V: np.ndarray,
    rec: _Recorder,
) -> tuple[np.ndarray, np.ndarray, int]:
    """Cloud update through solve_prox_batch; returns (gammas, mean inner iters, failed steps)."""
    blocks = block_ranges(cfg.n_particles, cfg.particle_block_size)
    gammas = np.empty(cfg.n_steps + 1)
    gammas[0] = gamma
    mean_iters = np.zeros(cfg.n_steps)
    failed = 0
    rec.record(0, X)
    eta = np.empty_like(X)
    for k in range(cfg.n_steps):
        params = step_params(alpha, gamma, mu, X, V)
        for block, start, stop in blocks:
            eta[start:stop] = step_generator(master, block, k).standard_normal((stop - start, obj.dim))
        Z = params.center + center_noise_scale(params.alpha, params.tau) * noise.apply(eta)
        U0 = X if inner_cfg.warm_start == WarmStart.PREVIOUS_X else Z
        result = solve_prox_batch(obj, params.lam, Z, U0, inner_cfg)
        mean_iters[k] = result.iters.mean()
        missed = int(np.count_nonzero(~result.converged))
        if missed:
            failed += missed
            logger.warning(
                "outer_step_failed",
                k=k,
                alpha=params.alpha,
                particles=missed,
                residual=float(result.residual_norm.max()),
                tolerance=inner_cfg.residual_tol,
            )
        V = velocity_update(result.x, X, params.alpha)
        X = result.x
        if gamma_mode == GammaMode.UPDATED:
            gamma = damping_update(gamma, params.alpha, mu)
        gammas[k + 1] = gamma
        rec.record(k + 1, X)
    return gammas, mean_iters, failed
