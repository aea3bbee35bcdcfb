"""Tests for Monte Carlo ensembles."""
from __future__ import annotations

import numpy as np
import pytest

from exceptions import ConfigurationError
from experiments.ensemble import initial_cloud, run_ensemble
from iron.noise import NoiseModel
from models.config import EnsembleConfig, InitSpec, InnerConfig
from models.shared import GammaMode, InitKind


def make_ensemble_config(n_particles=16, n_steps=40, **kwargs) -> EnsembleConfig:
    return EnsembleConfig(n_particles=n_particles, n_steps=n_steps, burn_in_fraction=0.5, **kwargs)


class TestInitialCloud:
    """Point and Gaussian-ball initializations."""

    def test_point_at_rest(self):
        """A point init copies x0 into every particle with v0 = x0."""
        X0, V0 = initial_cloud(InitSpec(x0=[1.0, 2.0]), 3, 2, seed=0, block_size=2, default_x0=np.zeros(2))
        np.testing.assert_array_equal(X0, [[1.0, 2.0]] * 3)
        np.testing.assert_array_equal(V0, X0)

    def test_default_point(self):
        """Without x0 the default point is used."""
        X0, _ = initial_cloud(InitSpec(), 2, 3, seed=0, block_size=8, default_x0=np.ones(3))
        np.testing.assert_array_equal(X0, np.ones((2, 3)))

    def test_ball_deterministic_and_centered(self):
        """Same seed and block size give the same ball; the ball is centered on the request."""
        spec = InitSpec(kind=InitKind.GAUSSIAN_BALL, center=[5.0, -5.0], radius=0.1)
        a, _ = initial_cloud(spec, 2000, 2, seed=3, block_size=500, default_x0=np.zeros(2))
        b, _ = initial_cloud(spec, 2000, 2, seed=3, block_size=500, default_x0=np.zeros(2))
        np.testing.assert_array_equal(a, b)
        np.testing.assert_allclose(a.mean(axis=0), [5.0, -5.0], atol=0.02)

    def test_wrong_dimension(self):
        """x0 must match the objective dimension."""
        with pytest.raises(ConfigurationError):
            initial_cloud(InitSpec(x0=[1.0]), 2, 3, seed=0, block_size=8, default_x0=np.zeros(3))


class TestRunEnsemble:
    """Cloud statistics, determinism and the two execution paths."""

    def test_noiseless_at_minimizer(self, rotated_quad):
        """rho = 0 started at rest at x* keeps mse at 0."""
        cfg = make_ensemble_config(init=InitSpec(x0=list(rotated_quad.x_star)))
        stats = run_ensemble(
            cfg, rotated_quad, GammaMode.FIXED, 1.0, NoiseModel.isotropic(0.0), None, 10.0, x_star=rotated_quad.x_star
        )
        np.testing.assert_allclose(stats.mse, 0.0, atol=1e-24)
        assert stats.mse.size == cfg.n_steps + 1

    def test_single_particle_has_no_spread(self, rotated_quad):
        """N = 1 gives cov_trace 0 at every step."""
        stats = run_ensemble(
            make_ensemble_config(n_particles=1),
            rotated_quad,
            GammaMode.FIXED,
            1.0,
            NoiseModel.isotropic(0.1),
            None,
            10.0,
            x_star=rotated_quad.x_star,
        )
        np.testing.assert_array_equal(stats.cov_trace, np.zeros(stats.cov_trace.size))
        assert np.isnan(stats.stationary_se)

    def test_decomposition_per_step(self, rotated_quad):
        """mse = bias_sq + cov_trace along the whole series."""
        stats = run_ensemble(
            make_ensemble_config(n_particles=200),
            rotated_quad,
            GammaMode.FIXED,
            1.0,
            NoiseModel.isotropic(0.1),
            None,
            10.0,
            x_star=rotated_quad.x_star,
        )
        np.testing.assert_allclose(stats.mse, stats.bias_sq + stats.cov_trace, rtol=1e-12)
        assert stats.scaled_mse == pytest.approx(10.0 * stats.stationary_mse)
        assert stats.stationary_se > 0

    def test_thread_count_does_not_change_results(self, small_logistic):
        """Per-particle streams make threads=1 and threads=3 identical."""
        obj, _ = small_logistic
        cfg = make_ensemble_config(n_particles=4, n_steps=20)
        x_star = np.zeros(obj.dim)
        runs = [
            run_ensemble(cfg, obj, GammaMode.FIXED, None, NoiseModel.isotropic(0.05), None, 20.0, x_star=x_star, threads=t)
            for t in (1, 3)
        ]
        np.testing.assert_array_equal(runs[0].mse, runs[1].mse)
        np.testing.assert_array_equal(runs[0].mean_inner_iters, runs[1].mean_inner_iters)

    def test_seed_changes_noise(self, rotated_quad):
        """Different master seeds give different clouds."""
        cfg = make_ensemble_config(n_particles=8)
        a, b = (
            run_ensemble(cfg, rotated_quad, GammaMode.FIXED, 1.0, NoiseModel.isotropic(0.1), None, 10.0, x_star=rotated_quad.x_star, seed=s)
            for s in (0, 1)
        )
        assert not np.array_equal(a.mse, b.mse)
        assert (a.seed, b.seed) == (0, 1)

    def test_cloud_path_matches_particle_path(self, rotated_quad):
        """With one particle per block the batched closed form and per-particle Newton agree."""
        cfg = make_ensemble_config(n_particles=3, n_steps=30, particle_block_size=1)
        noise = NoiseModel.isotropic(0.1)
        common = dict(x_star=rotated_quad.x_star, snapshot_steps=(-1,))
        batched = run_ensemble(cfg, rotated_quad, GammaMode.FIXED, 1.0, noise, InnerConfig(), 10.0, **common)
        generic = run_ensemble(
            cfg, rotated_quad, GammaMode.FIXED, 1.0, noise, InnerConfig(quadratic_closed_form=False, residual_tol=1e-13), 10.0, **common
        )
        np.testing.assert_allclose(batched.snapshots[30], generic.snapshots[30], atol=1e-9)

    def test_updated_gamma_series(self, rotated_quad):
        """The updated mode drives gamma from gamma0 towards mu."""
        stats = run_ensemble(
            make_ensemble_config(n_particles=2),
            rotated_quad,
            GammaMode.UPDATED,
            4.0,
            NoiseModel.isotropic(0.1),
            None,
            1.0,
            x_star=rotated_quad.x_star,
            mu=1.0,
        )
        assert stats.gamma[0] == 4.0
        assert np.all(np.diff(stats.gamma) <= 0)
        assert stats.gamma[-1] == pytest.approx(1.0, abs=1e-9)

    def test_snapshots_kept(self, rotated_quad):
        """Requested steps keep the full cloud; -1 is the last step."""
        stats = run_ensemble(
            make_ensemble_config(n_particles=5),
            rotated_quad,
            GammaMode.FIXED,
            1.0,
            NoiseModel.isotropic(0.1),
            None,
            10.0,
            x_star=rotated_quad.x_star,
            snapshot_steps=(0, -1),
        )
        assert sorted(stats.snapshots) == [0, 40]
        assert stats.snapshots[40].shape == (5, 3)


class TestBatchedCloud:
    """Vectorized LM solves across the cloud for objectives with batch derivatives."""

    def make_ball_config(self, x0, n_particles=3, n_steps=30, **kwargs) -> EnsembleConfig:
        init = InitSpec(kind=InitKind.GAUSSIAN_BALL, center=list(x0), radius=0.1)
        return make_ensemble_config(n_particles=n_particles, n_steps=n_steps, init=init, **kwargs)

    def test_batched_matches_particle_path(self, conditioned_logcosh):
        """With one particle per block the batched and per-particle log-cosh paths agree."""
        obj, x0 = conditioned_logcosh
        cfg = self.make_ball_config(x0, particle_block_size=1)
        noise = NoiseModel.isotropic(0.05)
        runs = [
            run_ensemble(
                cfg,
                obj,
                GammaMode.UPDATED,
                1.0,
                noise,
                InnerConfig(residual_tol=1e-12, batched=batched),
                50.0,
                x_star=x0,
                mu=1.0,
                snapshot_steps=(-1,),
            )
            for batched in (True, False)
        ]
        np.testing.assert_allclose(runs[0].snapshots[30], runs[1].snapshots[30], atol=1e-8)
        assert runs[0].failed_steps == runs[1].failed_steps == 0
        assert np.all(runs[0].mean_inner_iters >= 1)

    def test_particles_stay_in_planted_basin_at_large_alpha(self, conditioned_logcosh):
        """At alpha = 500 every particle keeps the signs of x0 and every step converges."""
        obj, x0 = conditioned_logcosh
        cfg = self.make_ball_config(x0, n_particles=200, n_steps=40)
        stats = run_ensemble(
            cfg, obj, GammaMode.UPDATED, 1.0, NoiseModel.isotropic(0.05), None, 500.0, mu=1.0, snapshot_steps=(-1,)
        )
        assert stats.failed_steps == 0
        assert np.all(np.sign(stats.snapshots[40]) == x0)
        assert np.all(np.isfinite(stats.cov_trace))

    def test_cg_config_falls_back_to_particle_path(self, conditioned_logcosh):
        """A CG linear solve is not batched but reaches the same cloud."""
        obj, x0 = conditioned_logcosh
        cfg = self.make_ball_config(x0, particle_block_size=1, n_steps=10)
        noise = NoiseModel.isotropic(0.05)
        direct = run_ensemble(
            cfg, obj, GammaMode.UPDATED, 1.0, noise, InnerConfig(residual_tol=1e-12), 10.0, mu=1.0, snapshot_steps=(-1,)
        )
        cg = run_ensemble(
            cfg,
            obj,
            GammaMode.UPDATED,
            1.0,
            noise,
            InnerConfig(residual_tol=1e-12, linear_solve={"kind": "cg"}),
            10.0,
            mu=1.0,
            snapshot_steps=(-1,),
        )
        np.testing.assert_allclose(direct.snapshots[10], cg.snapshots[10], atol=1e-8)
