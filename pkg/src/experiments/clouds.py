"""Projected particle clouds and their spread."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from exceptions import InvalidInputError

Plane = tuple[int, int]


@dataclass(frozen=True)
class CloudSnapshot:
    step: int
    points: dict[Plane, np.ndarray]
    spread: dict[Plane, float]

    @property
    def total_spread(self) -> float:
        return float(sum(self.spread.values()))


def default_planes(dim: int) -> list[Plane]:
    """All coordinate planes among the first three coordinates."""
    return list(combinations(range(min(dim, 3)), 2))


def cloud_snapshot(positions: np.ndarray, pairs: Sequence[Plane] | None = None, step: int = 0) -> CloudSnapshot:
    """Project an (N, n) cloud onto coordinate planes.

    Spread per plane is the trace of the 1/N empirical covariance of the
    projected points.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[1] < 2:
        raise InvalidInputError(f"cloud_snapshot needs an (N, n>=2) array, got shape {positions.shape}")
    dim = positions.shape[1]
    planes = list(pairs) if pairs is not None else default_planes(dim)
    for i, j in planes:
        if not (0 <= i < dim and 0 <= j < dim) or i == j:
            raise InvalidInputError(f"invalid projection plane ({i}, {j}) for dim {dim}")
    dev = positions - positions.mean(axis=0)
    per_coord = np.sum(dev * dev, axis=0) / positions.shape[0]
    points = {(i, j): positions[:, [i, j]].copy() for i, j in planes}
    spread = {(i, j): float(per_coord[i] + per_coord[j]) for i, j in planes}
    return CloudSnapshot(step=step, points=points, spread=spread)
