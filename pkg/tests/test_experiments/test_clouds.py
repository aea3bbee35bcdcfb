"""Tests for projected particle clouds."""
from __future__ import annotations

import numpy as np
import pytest

from exceptions import InvalidInputError
from experiments.clouds import cloud_snapshot, default_planes


class TestCloudSnapshot:
    """Planar projections and per-plane spread."""

    def test_default_planes(self):
        """Pairs among the first three coordinates."""
        assert default_planes(2) == [(0, 1)]
        assert default_planes(3) == [(0, 1), (0, 2), (1, 2)]
        assert default_planes(10) == [(0, 1), (0, 2), (1, 2)]

    def test_spread_is_projected_variance(self, rng):
        """Spread on (i, j) is Var_i + Var_j with 1/N normalization."""
        positions = rng.standard_normal((500, 3)) * np.array([1.0, 2.0, 3.0])
        snap = cloud_snapshot(positions, step=7)
        var = positions.var(axis=0)
        assert snap.step == 7
        assert snap.spread[(0, 2)] == pytest.approx(var[0] + var[2], rel=1e-12)
        assert snap.total_spread == pytest.approx(2.0 * var.sum(), rel=1e-12)
        np.testing.assert_array_equal(snap.points[(1, 2)], positions[:, [1, 2]])

    def test_custom_pairs(self, rng):
        """Only the requested planes are produced."""
        snap = cloud_snapshot(rng.standard_normal((5, 4)), pairs=[(2, 3)])
        assert list(snap.points) == [(2, 3)]

    def test_rejects_one_dimension(self):
        """Planar projections need dim >= 2."""
        with pytest.raises(InvalidInputError):
            cloud_snapshot(np.zeros((10, 1)))

    @pytest.mark.parametrize("pair", [(0, 0), (0, 3), (-1, 1)])
    def test_rejects_invalid_plane(self, rng, pair):
        """Plane indices must be distinct and in range."""
        with pytest.raises(InvalidInputError):
            cloud_snapshot(rng.standard_normal((5, 3)), pairs=[pair])
