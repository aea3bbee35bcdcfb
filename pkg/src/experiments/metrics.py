"""Ensemble metrics: bias-variance decomposition, stationary averages, log-log slopes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import structlog

from config.loader import get_metrics_config, get_min_stationary_samples
from exceptions import ConfigurationError, InvalidDataError

logger = structlog.get_logger(__name__)

_metrics = get_metrics_config()
CI_Z = float(_metrics.get("ci_z", 1.96))
SLOPE_UPPER_FRACTION = float(_metrics.get("slope_upper_fraction", 0.5))
MIN_WINDOW = get_min_stationary_samples()


def mse_decomposition(positions: np.ndarray, x_star: np.ndarray | None) -> tuple[float, float, float]:
    """(mse, bias_sq, cov_trace) of an (N, n) cloud, all with 1/N normalization.

    mse = bias_sq + cov_trace. Without a minimizer mse and bias_sq are nan.
    """
    mean = positions.mean(axis=0)
    dev = positions - mean
    cov_trace = float(np.sum(dev * dev) / positions.shape[0])
    if x_star is None:
        return float("nan"), float("nan"), cov_trace
    err = positions - x_star
    mse = float(np.sum(err * err) / positions.shape[0])
    bias = mean - x_star
    return mse, float(bias @ bias), cov_trace


def stationary_window(series: Sequence[float] | np.ndarray, burn_in_fraction: float, min_window: int = MIN_WINDOW) -> np.ndarray:
    arr = np.asarray(series, dtype=float)
    if not 0.0 <= burn_in_fraction < 1.0:
        raise ConfigurationError(f"burn_in_fraction must be in [0, 1), got {burn_in_fraction}")
    window = arr[int(arr.size * burn_in_fraction):]
    if window.size < min_window:
        raise ConfigurationError(
            f"stationary window has {window.size} samples; need >= {min_window}",
            details="increase n_steps or lower burn_in_fraction",
        )
    return window


def stationary_average(series: Sequence[float] | np.ndarray, burn_in_fraction: float, min_window: int = MIN_WINDOW) -> float:
    """Mean of the series after discarding the first floor(L * burn_in_fraction) entries.

    Raises:
        ConfigurationError: the retained window is shorter than min_window
    """
    return float(np.mean(stationary_window(series, burn_in_fraction, min_window)))


def one_lag_lyapunov(mse: Sequence[float] | np.ndarray, theta: float) -> np.ndarray:
    """V_k = MSE_k + theta MSE_{k-1} for k >= 1."""
    arr = np.asarray(mse, dtype=float)
    return arr[1:] + theta * arr[:-1]


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    per_seed_slopes: tuple[float, ...]
    ci95: tuple[float, float]
    alpha_range: tuple[float, float]
    plateau: float

    @property
    def n_seeds(self) -> int:
        return len(self.per_seed_slopes)


def _default_alpha_min(alphas: np.ndarray) -> float:
    """Lower edge of the upper part of the grid in log space."""
    lo, hi = np.log(alphas.min()), np.log(alphas.max())
    return float(np.exp(lo + (1.0 - SLOPE_UPPER_FRACTION) * (hi - lo)))


def slope_fit(
    alphas: Sequence[float],
    mses: Sequence[float] | None = None,
    per_seed_mses: Sequence[Sequence[float]] | None = None,
    *,
    alpha_min: float | None = None,
) -> SlopeFit:
    """Least-squares slope of log(mse) against log(alpha), per seed then averaged.

    ``per_seed_mses`` rows are seeds, columns follow ``alphas``; when absent,
    ``mses`` is treated as a single seed. Only alphas >= alpha_min enter the
    fit (default: the upper half of the grid in log space, widened to three
    points if needed). ci95 = mean +- z std / sqrt(n_seeds).

    Raises:
        InvalidDataError: fewer than 3 points or a nonpositive mse
    """
    a = np.asarray(alphas, dtype=float)
    if per_seed_mses is not None:
        table = np.atleast_2d(np.asarray(per_seed_mses, dtype=float))
    elif mses is not None:
        table = np.asarray(mses, dtype=float)[None, :]
    else:
        raise InvalidDataError("slope_fit needs mses or per_seed_mses")
    if table.shape[1] != a.size:
        raise InvalidDataError(f"{table.shape[1]} mse columns for {a.size} alphas")
    if a.size < 3:
        raise InvalidDataError(f"slope fit needs >= 3 grid points, got {a.size}")
    if np.any(~np.isfinite(table)) or np.any(table <= 0):
        raise InvalidDataError("slope fit needs positive finite mse values")

    order = np.argsort(a)
    a, table = a[order], table[:, order]
    cutoff = _default_alpha_min(a) if alpha_min is None else alpha_min
    mask = a >= cutoff * (1.0 - 1e-12)
    if mask.sum() < 3:
        mask = np.zeros(a.size, dtype=bool)
        mask[-3:] = True
    la = np.log(a[mask])

    fits = [np.polyfit(la, np.log(row[mask]), 1) for row in table]
    slopes = np.array([f[0] for f in fits])
    intercepts = np.array([f[1] for f in fits])
    slope = float(np.mean(slopes))
    half = CI_Z * float(np.std(slopes, ddof=1)) / math.sqrt(slopes.size) if slopes.size > 1 else 0.0
    plateau = float(np.mean(a[mask] * table[:, mask]))
    result = SlopeFit(
        slope=slope,
        intercept=float(np.mean(intercepts)),
        per_seed_slopes=tuple(float(s) for s in slopes),
        ci95=(slope - half, slope + half),
        alpha_range=(float(a[mask][0]), float(a[mask][-1])),
        plateau=plateau,
    )
    logger.debug("slope_fit", slope=slope, ci95=result.ci95, n_seeds=slopes.size, alpha_range=result.alpha_range)
    return result


def plateau_coefficient(alphas: Sequence[float], mses: Sequence[float], alpha_min: float | None = None) -> float:
    """Mean of alpha * mse over the large-alpha range: the empirical analogue of C_quad."""
    a = np.asarray(alphas, dtype=float)
    m = np.asarray(mses, dtype=float)
    cutoff = _default_alpha_min(a) if alpha_min is None else alpha_min
    mask = a >= cutoff * (1.0 - 1e-12)
    if not mask.any():
        raise InvalidDataError(f"no alpha >= {cutoff} in the grid")
    return float(np.mean(a[mask] * m[mask]))
