"""One runner per CLI subcommand; each writes its CSV artifacts and returns their paths."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import structlog

from config.loader import get_ensemble_defaults
from exceptions import ConfigurationError, InvalidDataError, UnstableDynamicsError
from experiments.clouds import cloud_snapshot
from experiments.ensemble import EnsembleStats, run_ensemble
from experiments.metrics import slope_fit
from experiments.reference import cached_reference_minimizer
from experiments.sweeps import tolerance_sweep
from iron.noise import NoiseModel
from models.config import ExperimentConfig, dump_experiment_config
from models.shared import GammaMode, ObjectiveKind
from objectives.factory import BuiltObjective, build_objective
from objectives.quadratic import Quadratic
from quad_exact.stationary import asymptotic_constant, stability_threshold, stationary_mse_exact
from utils.csv_writer import write_csv

logger = structlog.get_logger(__name__)

MSE_HEADER = ["alpha", "seed", "iter", "mse", "bias_sq", "cov_trace", "gamma", "warning"]
CLOUD_HEADER = ["alpha", "seed", "step", "kind", "particle", "coord_i", "coord_j", "value_i", "value_j"]
SCALED_HEADER = [
    "alpha",
    "mc_scaled_mse",
    "mc_scaled_se",
    "exact_scaled_mse",
    "c_quad",
    "spectral_radius_max",
    "stable",
]
SWEEP_HEADER = [
    "alpha",
    "delta",
    "seed",
    "stationary_mse",
    "scaled_mse",
    "mean_inner_iters",
    "failed_steps",
    "departed",
]
SLOPE_HEADER = ["delta", "slope", "ci_lo", "ci_hi", "alpha_min", "alpha_max", "plateau", "n_seeds"]
SPREAD_HEADER = ["alpha", "seed", "step", "plane_i", "plane_j", "cov_trace", "failed_steps"]


@dataclass
class _Setup:
    cfg: ExperimentConfig
    built: BuiltObjective
    noise: NoiseModel
    mu: float
    gamma0: float
    out_dir: Path


def _prepare(cfg: ExperimentConfig, out_dir: str | Path | None, allowed: set[ObjectiveKind], command: str) -> _Setup:
    if cfg.objective.kind not in allowed:
        raise ConfigurationError(
            f"{command} does not support objective kind '{cfg.objective.kind.value}'",
            details=f"supported: {sorted(k.value for k in allowed)}",
        )
    built = build_objective(cfg.objective)
    noise = NoiseModel.from_config(cfg.noise, cfg.resolved_rho())
    mu = cfg.dynamics.resolve_mu(built.objective.mu)
    directory = Path(out_dir if out_dir is not None else cfg.output_dir)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "config.yaml").write_text(dump_experiment_config(cfg), encoding="utf-8")
    return _Setup(cfg, built, noise, mu, cfg.dynamics.resolve_gamma0(mu), directory)


def _cloud_rows(stats: EnsembleStats, cfg: ExperimentConfig, marker: np.ndarray | None, marker_kind: str) -> list[list]:
    rows: list[list] = []
    cap = cfg.analysis.cloud_max_particles
    for step, positions in sorted(stats.snapshots.items()):
        if positions.shape[1] < 2:
            continue
        snap = cloud_snapshot(positions[:cap], cfg.analysis.cloud_pairs, step=step)
        for (i, j), pts in snap.points.items():
            rows.extend([stats.alpha, stats.seed, step, "particle", p, i, j, pts[p, 0], pts[p, 1]] for p in range(pts.shape[0]))
            if marker is not None:
                rows.append([stats.alpha, stats.seed, step, marker_kind, -1, i, j, marker[i], marker[j]])
    return rows


def run_quad_sim(cfg: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> list[Path]:
    """MSE bias-variance series per alpha plus initial and final clouds."""
    s = _prepare(cfg, out_dir, {ObjectiveKind.QUADRATIC}, "quad-sim")
    quad = s.built.objective
    assert isinstance(quad, Quadratic)
    ens = cfg.ensemble_config()
    warnings: dict[float, str] = {}
    if cfg.dynamics.gamma_mode == GammaMode.FIXED:
        table = stability_threshold(quad, s.gamma0, s.mu, s.noise.rho, ens.alpha_grid)
        warnings = {row.alpha: "" if row.stable else "unstable" for row in table.rows}

    mse_rows: list[list] = []
    cloud_rows: list[list] = []
    for alpha in ens.alpha_grid:
        for seed in ens.seeds:
            stats = run_ensemble(
                ens,
                quad,
                cfg.dynamics.gamma_mode,
                s.gamma0,
                s.noise,
                cfg.inner,
                alpha,
                x_star=s.built.x_star,
                mu=s.mu,
                seed=seed,
                threads=threads,
                snapshot_steps=(0, -1),
            )
            warn = warnings.get(float(alpha), "")
            mse_rows.extend(
                [alpha, seed, k, stats.mse[k], stats.bias_sq[k], stats.cov_trace[k], stats.gamma[k], warn]
                for k in range(stats.mse.size)
            )
            cloud_rows.extend(_cloud_rows(stats, cfg, s.built.x_star, "minimizer"))

    return [
        write_csv(s.out_dir / "mse_decomposition.csv", MSE_HEADER, mse_rows),
        write_csv(s.out_dir / "clouds.csv", CLOUD_HEADER, cloud_rows),
    ]


def run_quad_lyapunov(cfg: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> list[Path]:
    """Monte Carlo alpha*MSE against the exact Lyapunov curve and C_quad."""
    if cfg.dynamics.gamma_mode != GammaMode.FIXED:
        raise ConfigurationError(
            "quad-lyapunov requires dynamics.gamma_mode: fixed",
            details="with an updated gamma the quadratic recursion is time-varying and has no exact stationary curve",
        )
    s = _prepare(cfg, out_dir, {ObjectiveKind.QUADRATIC}, "quad-lyapunov")
    quad = s.built.objective
    assert isinstance(quad, Quadratic)
    ens = cfg.ensemble_config()
    table = stability_threshold(quad, s.gamma0, s.mu, s.noise.rho, ens.alpha_grid)
    c_quad = asymptotic_constant(quad, s.gamma0, noise=s.noise)

    rows: list[list] = []
    for alpha, stab in zip(ens.alpha_grid, table.rows):
        runs = [
            run_ensemble(
                ens,
                quad,
                GammaMode.FIXED,
                s.gamma0,
                s.noise,
                cfg.inner,
                alpha,
                x_star=s.built.x_star,
                mu=s.mu,
                seed=seed,
                threads=threads,
            )
            for seed in ens.seeds
        ]
        mc = float(np.mean([r.scaled_mse for r in runs]))
        se = float(np.sqrt(np.sum([r.scaled_se**2 for r in runs])) / len(runs))
        try:
            exact = alpha * stationary_mse_exact(quad, alpha, s.gamma0, s.mu, noise=s.noise)
        except UnstableDynamicsError as e:
            logger.warning("exact_curve_unstable", alpha=alpha, eigenvalue=e.eigenvalue, spectral_radius=e.spectral_radius)
            exact = float("nan")
        if np.isfinite(exact) and np.isfinite(se) and abs(mc - exact) > 3.0 * se > 0:
            logger.warning("mc_exact_gap", alpha=alpha, mc=mc, exact=exact, se=se)
        rows.append([alpha, mc, se, exact, c_quad, stab.max_radius, stab.stable])

    return [write_csv(s.out_dir / "scaled_mse.csv", SCALED_HEADER, rows)]


def run_logreg_sweep(cfg: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> list[Path]:
    """(alpha, delta, seed) stationary MSE sweep with per-delta slope fits."""
    s = _prepare(cfg, out_dir, {ObjectiveKind.RIDGE_LOGISTIC, ObjectiveKind.QUADRATIC}, "logreg-sweep")
    obj = s.built.objective
    x_star = s.built.x_star
    if x_star is None:
        cache_dir = Path(cfg.reference_cache_dir) if cfg.reference_cache_dir else None
        x_star = cached_reference_minimizer(obj, cfg.objective, cache_dir)
    ens = cfg.ensemble_config()
    rows = tolerance_sweep(
        ens,
        obj,
        ens.alpha_grid,
        cfg.grids.delta,
        noise=s.noise,
        inner_cfg=cfg.inner,
        x_star=x_star,
        gamma_mode=cfg.dynamics.gamma_mode,
        gamma0=s.gamma0,
        mu=s.mu,
        threads=threads,
        departure_threshold=cfg.analysis.departure_threshold,
    )

    slope_rows: list[list] = []
    for delta in cfg.grids.delta:
        table = [
            [next(r.stationary_mse for r in rows if r.delta == delta and r.alpha == a and r.seed == seed) for a in ens.alpha_grid]
            for seed in ens.seeds
        ]
        try:
            fit = slope_fit(ens.alpha_grid, per_seed_mses=table, alpha_min=cfg.analysis.slope_alpha_min)
        except InvalidDataError as e:
            logger.warning("slope_fit_skipped", delta=delta, reason=e.message)
            continue
        slope_rows.append([delta, fit.slope, fit.ci95[0], fit.ci95[1], fit.alpha_range[0], fit.alpha_range[1], fit.plateau, fit.n_seeds])

    sweep_rows = [
        [r.alpha, r.delta, r.seed, r.stationary_mse, r.scaled_mse, r.mean_inner_iters, r.failed_steps, r.departed]
        for r in rows
    ]
    return [
        write_csv(s.out_dir / "stationary_mse.csv", SWEEP_HEADER, sweep_rows),
        write_csv(s.out_dir / "slope_fit.csv", SLOPE_HEADER, slope_rows),
    ]


def run_logcosh_sim(cfg: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1) -> list[Path]:
    """Initial and late-time clouds plus per-plane spread over time."""
    s = _prepare(cfg, out_dir, {ObjectiveKind.LOG_COSH}, "logcosh-sim")
    obj = s.built.objective
    if obj.dim < 2:
        raise ConfigurationError("logcosh-sim needs dimension >= 2 for planar projections")
    ens = cfg.ensemble_config()
    planted = s.built.planted
    default_center = planted if planted is not None else np.zeros(obj.dim)
    every = max(1, int(get_ensemble_defaults().get("record_every", 1)))
    steps = sorted(set(range(0, ens.n_steps + 1, every)) | {ens.n_steps})

    cloud_rows: list[list] = []
    spread_rows: list[list] = []
    for alpha in ens.alpha_grid:
        for seed in ens.seeds:
            stats = run_ensemble(
                ens,
                obj,
                cfg.dynamics.gamma_mode,
                s.gamma0,
                s.noise,
                cfg.inner,
                alpha,
                mu=s.mu,
                seed=seed,
                threads=threads,
                snapshot_steps=steps,
                default_x0=default_center,
            )
            if stats.failed_steps:
                logger.warning("logcosh_failed_steps", alpha=alpha, seed=seed, failed_steps=stats.failed_steps)
            for step in steps:
                snap = cloud_snapshot(stats.snapshots[step], cfg.analysis.cloud_pairs, step=step)
                spread_rows.extend(
                    [alpha, seed, step, i, j, value, stats.failed_steps] for (i, j), value in snap.spread.items()
                )
            edge = {0: stats.snapshots[0], ens.n_steps: stats.snapshots[ens.n_steps]}
            stats.snapshots = edge
            cloud_rows.extend(_cloud_rows(stats, cfg, planted, "planted"))

    return [
        write_csv(s.out_dir / "clouds.csv", CLOUD_HEADER, cloud_rows),
        write_csv(s.out_dir / "spread.csv", SPREAD_HEADER, spread_rows),
    ]
