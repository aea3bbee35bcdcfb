"""Stepsize schedules. All entries must be >= 1."""
from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from exceptions import ConfigurationError

Schedule = Union[float, Sequence[float], np.ndarray]


def constant(alpha: float, n_steps: int) -> np.ndarray:
    return resolve_schedule(float(alpha), n_steps)


def geometric_ramp(alpha_lo: float, alpha_hi: float, n_steps: int) -> np.ndarray:
    """Geometric interpolation from alpha_lo to alpha_hi over n_steps entries."""
    if n_steps == 0:
        return np.empty(0)
    return resolve_schedule(np.geomspace(alpha_lo, alpha_hi, n_steps), n_steps)


def resolve_schedule(schedule: Schedule, n_steps: int) -> np.ndarray:
    """Expand a scalar or sequence into n_steps validated stepsizes.

    Raises:
        ConfigurationError: an entry below 1, non-finite, or a sequence
            shorter than n_steps
    """
    if n_steps < 0:
        raise ConfigurationError(f"n_steps must be >= 0, got {n_steps}")
    if np.ndim(schedule) == 0:
        alphas = np.full(n_steps, float(schedule))  # type: ignore[arg-type]
    else:
        seq = np.asarray(schedule, dtype=float)
        if seq.size < n_steps:
            raise ConfigurationError(
                f"schedule has {seq.size} entries but {n_steps} steps were requested"
            )
        alphas = seq[:n_steps].copy()
    bad = alphas[~np.isfinite(alphas) | (alphas < 1.0)]
    if bad.size:
        raise ConfigurationError(
            f"schedule entries must be >= 1, got {bad[0]}",
            details=f"offending entries: {bad.tolist()[:5]}",
        )
    return alphas
