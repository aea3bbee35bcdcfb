"""Tests for the per-subcommand experiment runners on small configurations."""
from __future__ import annotations

import csv
from pathlib import Path

import pytest

from exceptions import ConfigurationError
from experiments.runners import (
    CLOUD_HEADER,
    MSE_HEADER,
    SCALED_HEADER,
    SLOPE_HEADER,
    SPREAD_HEADER,
    SWEEP_HEADER,
    run_logcosh_sim,
    run_logreg_sweep,
    run_quad_lyapunov,
    run_quad_sim,
)
from models.config import ExperimentConfig, load_experiment_config


def make_config(kind="quadratic", **sections) -> ExperimentConfig:
    raw = {
        "objective": {"kind": kind},
        "ensemble": {"n_particles": 20, "n_steps": 20, "burn_in_fraction": 0.5, "seeds": [0]},
        "grids": {"alpha": [1.0, 10.0]},
    }
    for key, value in sections.items():
        raw.setdefault(key, {})
        if isinstance(value, dict):
            raw[key].update(value)
        else:
            raw[key] = value
    return ExperimentConfig.model_validate(raw)


def read_csv(path: Path) -> tuple[list[str], list[list[str]]]:
    with path.open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


class TestQuadSim:
    """MSE series and clouds for quadratics."""

    def test_writes_series_and_clouds(self, tmp_path):
        """One row per (alpha, seed, iter) plus the config snapshot."""
        written = run_quad_sim(make_config(), tmp_path)
        assert [p.name for p in written] == ["mse_decomposition.csv", "clouds.csv"]
        header, rows = read_csv(tmp_path / "mse_decomposition.csv")
        assert header == MSE_HEADER
        assert len(rows) == 2 * 21
        assert all(r[-1] == "" for r in rows)
        clouds_header, cloud_rows = read_csv(tmp_path / "clouds.csv")
        assert clouds_header == CLOUD_HEADER
        # 2 alphas x 2 snapshot steps x 3 planes x (20 particles + minimizer)
        assert len(cloud_rows) == 2 * 2 * 3 * 21
        reloaded = load_experiment_config(tmp_path / "config.yaml")
        assert reloaded == make_config()

    def test_rejects_other_objectives(self, tmp_path):
        """quad-sim needs a quadratic objective."""
        with pytest.raises(ConfigurationError):
            run_quad_sim(make_config(kind="log_cosh"), tmp_path)

    def test_rerun_is_byte_identical(self, tmp_path):
        """Same config and seed write identical CSV files."""
        run_quad_sim(make_config(), tmp_path / "a")
        run_quad_sim(make_config(), tmp_path / "b")
        for name in ("mse_decomposition.csv", "clouds.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_cloud_particle_cap(self, tmp_path):
        """cloud_max_particles limits the exported points."""
        run_quad_sim(make_config(analysis={"cloud_max_particles": 5, "cloud_pairs": [[0, 1]]}), tmp_path)
        _, rows = read_csv(tmp_path / "clouds.csv")
        assert len(rows) == 2 * 2 * (5 + 1)


class TestQuadLyapunov:
    """Monte Carlo against the exact stationary curve."""

    def test_one_row_per_alpha(self, tmp_path):
        """Columns follow SCALED_HEADER and every grid alpha is stable at gamma = mu."""
        run_quad_lyapunov(make_config(dynamics={"gamma_mode": "fixed"}), tmp_path)
        header, rows = read_csv(tmp_path / "scaled_mse.csv")
        assert header == SCALED_HEADER
        assert [float(r[0]) for r in rows] == [1.0, 10.0]
        assert all(r[-1] == "true" for r in rows)
        assert float(rows[0][4]) == pytest.approx(0.01 * 19.0 / 9.0, rel=1e-10)

    def test_rejects_updated_gamma(self, tmp_path):
        """The exact curve exists only for a fixed gamma."""
        with pytest.raises(ConfigurationError):
            run_quad_lyapunov(make_config(dynamics={"gamma_mode": "updated"}), tmp_path)

    def test_zero_noise_collapses(self, tmp_path):
        """rho = 0 gives a zero exact curve, a zero constant and a vanishing Monte Carlo MSE."""
        cfg = make_config(
            dynamics={"gamma_mode": "fixed"},
            noise={"rho": 0.0},
            ensemble={"n_steps": 200},
            grids={"alpha": [10.0, 50.0]},
        )
        run_quad_lyapunov(cfg, tmp_path)
        _, rows = read_csv(tmp_path / "scaled_mse.csv")
        assert len(rows) == 2
        for r in rows:
            assert float(r[3]) == 0.0
            assert float(r[4]) == 0.0
            assert float(r[1]) <= 1e-10


class TestLogregSweep:
    """Stationary MSE sweep and slope fit."""

    def test_sweep_and_slope(self, tmp_path):
        """Rows for every (alpha, delta, seed) and one slope row per delta."""
        cfg = make_config(
            kind="ridge_logistic",
            objective={"kind": "ridge_logistic", "ridge_logistic": {"dim": 3, "n_samples": 50, "lambda_reg": 0.1, "data_seed": 2}},
            ensemble={"n_particles": 1, "n_steps": 30, "seeds": [0, 1]},
            grids={"alpha": [10.0, 20.0, 50.0], "delta": [1e-10]},
            reference_cache_dir=str(tmp_path / "cache"),
        )
        run_logreg_sweep(cfg, tmp_path / "out")
        header, rows = read_csv(tmp_path / "out" / "stationary_mse.csv")
        assert header == SWEEP_HEADER
        assert len(rows) == 3 * 1 * 2
        assert all(r[-1] == "false" for r in rows)
        slope_header, slope_rows = read_csv(tmp_path / "out" / "slope_fit.csv")
        assert slope_header == SLOPE_HEADER
        assert len(slope_rows) == 1
        assert int(slope_rows[0][-1]) == 2
        assert list((tmp_path / "cache").glob("*.json"))

    def test_short_grid_skips_slope(self, tmp_path):
        """Fewer than three alphas leave slope_fit.csv with only a header."""
        cfg = make_config(
            kind="ridge_logistic",
            objective={"kind": "ridge_logistic", "ridge_logistic": {"dim": 2, "n_samples": 30, "lambda_reg": 0.1, "data_seed": 2}},
            ensemble={"n_particles": 1, "n_steps": 20},
            grids={"alpha": [10.0, 20.0], "delta": [1e-10]},
            reference_cache_dir=str(tmp_path / "cache"),
        )
        run_logreg_sweep(cfg, tmp_path)
        _, slope_rows = read_csv(tmp_path / "slope_fit.csv")
        assert slope_rows == []


class TestLogcoshSim:
    """Clouds and spread for the nonconvex objective."""

    def test_writes_clouds_and_spread(self, tmp_path):
        """Spread rows cover every recorded step and plane."""
        cfg = make_config(
            kind="log_cosh",
            ensemble={"n_particles": 10, "init": {"kind": "gaussian_ball", "radius": 0.1}},
            grids={"alpha": [10.0]},
        )
        run_logcosh_sim(cfg, tmp_path)
        header, rows = read_csv(tmp_path / "spread.csv")
        assert header == SPREAD_HEADER
        assert len(rows) == 21 * 3
        assert all(float(r[5]) >= 0.0 for r in rows)
        _, cloud_rows = read_csv(tmp_path / "clouds.csv")
        # 2 edge snapshots x 3 planes x (10 particles + planted marker)
        assert len(cloud_rows) == 2 * 3 * 11
        assert any(r[3] == "planted" for r in cloud_rows)

    def test_rejects_one_dimension(self, tmp_path):
        """Planar projections need n >= 2."""
        cfg = make_config(kind="log_cosh", objective={"kind": "log_cosh", "log_cosh": {"m": 3, "n": 1}}, grids={"alpha": [10.0]})
        with pytest.raises(ConfigurationError):
            run_logcosh_sim(cfg, tmp_path)
