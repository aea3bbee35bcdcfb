"""Inner-tolerance sweeps over (alpha, delta, seed)."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog

from config.loader import get_metrics_config
from exceptions import ConfigurationError
from experiments.ensemble import EnsembleStats, run_ensemble
from iron.noise import NoiseModel
from models.config import EnsembleConfig, InnerConfig
from models.shared import GammaMode
from objectives.base import Objective

logger = structlog.get_logger(__name__)

DEPARTURE_THRESHOLD = float(get_metrics_config().get("tolerance_departure_threshold", 0.25))


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    delta: float
    seed: int
    stationary_mse: float
    scaled_mse: float
    mean_inner_iters: float
    failed_steps: int
    departed: bool = False


def tolerance_sweep(
    cfg: EnsembleConfig,
    obj: Objective,
    alpha_grid: Sequence[float],
    delta_grid: Sequence[float],
    *,
    noise: NoiseModel,
    inner_cfg: InnerConfig | None = None,
    x_star: np.ndarray,
    gamma_mode: GammaMode = GammaMode.FIXED,
    gamma0: float | None = None,
    mu: float | None = None,
    threads: int = 1,
    departure_threshold: float = DEPARTURE_THRESHOLD,
) -> list[SweepRow]:
    """Full (alpha, delta, seed) cross product of stationary ensembles.

    A (alpha, delta) cell is flagged ``departed`` when its seed-averaged
    scaled MSE differs from the tightest delta's by more than
    ``departure_threshold`` relative.
    """
    if not alpha_grid or not delta_grid:
        raise ConfigurationError("tolerance_sweep needs nonempty alpha and delta grids")
    base = inner_cfg or InnerConfig()
    raw: list[tuple[EnsembleStats, float]] = []
    for delta in delta_grid:
        inner = base.with_tolerance(delta)
        for alpha in alpha_grid:
            for seed in cfg.seeds:
                stats = run_ensemble(
                    cfg, obj, gamma_mode, gamma0, noise, inner, alpha, x_star=x_star, mu=mu, seed=seed, threads=threads
                )
                raw.append((stats, float(delta)))

    cell: dict[tuple[float, float], list[float]] = defaultdict(list)
    for stats, delta in raw:
        cell[(stats.alpha, delta)].append(stats.scaled_mse)
    tight = min(float(d) for d in delta_grid)
    departed: dict[tuple[float, float], bool] = {}
    for (alpha, delta), values in cell.items():
        ref = float(np.mean(cell[(alpha, tight)]))
        rel = abs(float(np.mean(values)) - ref) / ref if ref > 0 else float("inf")
        departed[(alpha, delta)] = delta != tight and rel > departure_threshold
        if departed[(alpha, delta)]:
            logger.warning("tolerance_departure", alpha=alpha, delta=delta, relative_change=rel)

    return [
        SweepRow(
            alpha=stats.alpha,
            delta=delta,
            seed=stats.seed,
            stationary_mse=stats.stationary_mse,
            scaled_mse=stats.scaled_mse,
            mean_inner_iters=stats.stationary_inner_iters,
            failed_steps=stats.failed_steps,
            departed=departed[(stats.alpha, delta)],
        )
        for stats, delta in raw
    ]
