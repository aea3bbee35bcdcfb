"""Pydantic models for solver and experiment configuration.

One experiment file fully determines one experiment; `dump_experiment_config`
and `load_experiment_config` round-trip every field.
"""
from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from config.loader import get_config, get_default_rho, get_objective_defaults
from models.shared import (
    Curvature,
    GammaMode,
    InitKind,
    LinearSolveKind,
    NoiseKind,
    ObjectiveKind,
    WarmStart,
)

_config = get_config()
RESIDUAL_TOL = _config.get("inner.residual_tol", 1e-10)
MAX_INNER_ITERS = _config.get("inner.max_iters", 50)
BACKTRACK_BETA = _config.get("inner.backtrack_beta", 0.5)
MAX_BACKTRACKS = _config.get("inner.max_backtracks", 30)
DIRECT_MAX_DIM = _config.get("inner.linear_solve.direct_max_dim", 512)
CG_REL_TOL = _config.get("inner.linear_solve.cg_rel_tol", 1e-10)
MAX_CG = _config.get("inner.linear_solve.max_cg", 1000)
N_PARTICLES = _config.get("ensemble.n_particles", 20000)
N_STEPS = _config.get("ensemble.n_steps", 400)
BURN_IN_FRACTION = _config.get("ensemble.burn_in_fraction", 0.5)
MIN_STATIONARY_SAMPLES = _config.get("ensemble.min_stationary_samples", 10)
PARTICLE_BLOCK_SIZE = _config.get("ensemble.particle_block_size", 4096)
DEPARTURE_THRESHOLD = _config.get("metrics.tolerance_departure_threshold", 0.25)
CLOUD_MAX_PARTICLES = _config.get("metrics.cloud_max_particles", 2000)
DEFAULT_MU_DYN = _config.get("dynamics.default_mu_dyn", 1.0)


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_alpha_grid(v: list[float]) -> list[float]:
    if not v:
        raise ValueError("alpha grid must be nonempty")
    if any(a < 1.0 for a in v):
        raise ValueError("alpha grid entries must be >= 1")
    if any(b <= a for a, b in zip(v, v[1:])):
        raise ValueError("alpha grid must be strictly ascending")
    return v


class LinearSolveConfig(_Strict):
    """Direct dense factorization or matrix-free CG on the LM system."""
    kind: LinearSolveKind = LinearSolveKind.AUTO
    direct_max_dim: int = Field(default=DIRECT_MAX_DIM, ge=1)
    cg_rel_tol: float = Field(default=CG_REL_TOL, gt=0)
    max_cg: int = Field(default=MAX_CG, ge=1)


class InnerConfig(_Strict):
    """Inner LM/Newton settings: tolerance delta, N_max, linear solve, damping."""
    residual_tol: float = Field(default=RESIDUAL_TOL, gt=0)
    max_iters: int = Field(default=MAX_INNER_ITERS, ge=1)
    linear_solve: LinearSolveConfig = Field(default_factory=LinearSolveConfig)
    backtrack_beta: float = Field(default=BACKTRACK_BETA, gt=0, lt=1)
    max_backtracks: int = Field(default=MAX_BACKTRACKS, ge=0)
    warm_start: WarmStart = WarmStart.PREVIOUS_X
    curvature: Curvature = Curvature.EXACT
    quadratic_closed_form: bool = True
    # ensembles solve all particles in one array pass when the objective is vectorized
    batched: bool = True

    def with_tolerance(self, residual_tol: float) -> InnerConfig:
        return self.model_copy(update={"residual_tol": residual_tol})


class InitSpec(_Strict):
    """Particle initialization: a point (x0, v0) or a Gaussian ball."""
    kind: InitKind = InitKind.POINT
    x0: list[float] | None = None
    v0: list[float] | None = None
    center: list[float] | None = None
    radius: float = Field(default=0.5, ge=0)


class EnsembleConfig(_Strict):
    """Monte Carlo ensemble layout."""
    n_particles: int = Field(default=N_PARTICLES, ge=1)
    n_steps: int = Field(default=N_STEPS, ge=1)
    burn_in_fraction: float = Field(default=BURN_IN_FRACTION, ge=0, lt=1)
    alpha_grid: list[float] = Field(default_factory=lambda: [1.0, 10.0, 200.0, 500.0])
    seeds: list[int] = Field(default_factory=lambda: [0])
    init: InitSpec = Field(default_factory=InitSpec)
    particle_block_size: int = Field(default=PARTICLE_BLOCK_SIZE, ge=1)

    @field_validator("alpha_grid")
    @classmethod
    def _alpha_grid_ascending(cls, v: list[float]) -> list[float]:
        return _check_alpha_grid(v)

    @field_validator("seeds")
    @classmethod
    def _seeds_nonempty(cls, v: list[int]) -> list[int]:
        if not v:
            raise ValueError("at least one seed is required")
        return v

    @model_validator(mode="after")
    def _window_long_enough(self) -> EnsembleConfig:
        if self.stationary_window < MIN_STATIONARY_SAMPLES:
            raise ValueError(
                f"burn-in leaves {self.stationary_window} stationary samples; "
                f"need >= {MIN_STATIONARY_SAMPLES}"
            )
        return self

    @property
    def burn_in_steps(self) -> int:
        # Series include the initial state, so they have n_steps + 1 entries.
        return int((self.n_steps + 1) * self.burn_in_fraction)

    @property
    def stationary_window(self) -> int:
        return self.n_steps + 1 - self.burn_in_steps


class QuadraticSpec(_Strict):
    eigenvalues: list[float] = Field(
        default_factory=lambda: list(get_objective_defaults("quadratic").get("eigenvalues", [1.0, 1.0, 3.0]))
    )
    rotation_seed: int | None = Field(
        default_factory=lambda: get_objective_defaults("quadratic").get("rotation_seed", 7)
    )
    b_scale: float = Field(default_factory=lambda: get_objective_defaults("quadratic").get("b_scale", 1.0))
    matrix: list[list[float]] | None = None
    b: list[float] | None = None


class RidgeLogisticSpec(_Strict):
    dim: int = Field(default_factory=lambda: get_objective_defaults("ridge_logistic").get("dim", 20), ge=1)
    n_samples: int = Field(
        default_factory=lambda: get_objective_defaults("ridge_logistic").get("n_samples", 1000), ge=1
    )
    lambda_reg: float = Field(
        default_factory=lambda: get_objective_defaults("ridge_logistic").get("lambda_reg", 0.1), gt=0
    )
    data_seed: int = Field(default_factory=lambda: get_objective_defaults("ridge_logistic").get("data_seed", 11))


class LogCoshSpec(_Strict):
    m: int = Field(default_factory=lambda: get_objective_defaults("log_cosh").get("m", 20), ge=1)
    n: int = Field(default_factory=lambda: get_objective_defaults("log_cosh").get("n", 3), ge=1)
    data_seed: int = Field(default_factory=lambda: get_objective_defaults("log_cosh").get("data_seed", 3))
    a_matrix: list[list[float]] | None = None
    b: list[float] | None = None


class ObjectiveSpec(_Strict):
    kind: ObjectiveKind = ObjectiveKind.QUADRATIC
    quadratic: QuadraticSpec = Field(default_factory=QuadraticSpec)
    ridge_logistic: RidgeLogisticSpec = Field(default_factory=RidgeLogisticSpec)
    log_cosh: LogCoshSpec = Field(default_factory=LogCoshSpec)


class DynamicsConfig(_Strict):
    """mu used in tau and the gamma update, initial damping and its mode."""
    mu_dyn: float | None = Field(default=None, gt=0)
    gamma0: float | None = Field(default=None, gt=0)
    gamma_mode: GammaMode = GammaMode.FIXED

    def resolve_mu(self, objective_mu: float) -> float:
        """mu_dyn when set, else the objective modulus, else the configured default."""
        if self.mu_dyn is not None:
            return self.mu_dyn
        return objective_mu if objective_mu > 0 else DEFAULT_MU_DYN

    def resolve_gamma0(self, mu: float) -> float:
        return self.gamma0 if self.gamma0 is not None else mu


class NoiseConfig(_Strict):
    kind: NoiseKind = NoiseKind.ISOTROPIC
    rho: float | None = Field(default=None, ge=0)
    sigma_sqrt: list[list[float]] | None = None
    sigma_sqrt_path: str | None = None
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _general_has_factor(self) -> NoiseConfig:
        if self.kind == NoiseKind.GENERAL and self.sigma_sqrt is None and self.sigma_sqrt_path is None:
            raise ValueError("general noise needs sigma_sqrt or sigma_sqrt_path")
        return self


class GridsConfig(_Strict):
    alpha: list[float] = Field(default_factory=lambda: [1.0, 10.0, 200.0, 500.0])
    delta: list[float] = Field(default_factory=lambda: [RESIDUAL_TOL])

    @field_validator("alpha")
    @classmethod
    def _alpha_grid_ascending(cls, v: list[float]) -> list[float]:
        return _check_alpha_grid(v)

    @field_validator("delta")
    @classmethod
    def _deltas_positive(cls, v: list[float]) -> list[float]:
        if not v or any(d <= 0 for d in v):
            raise ValueError("delta grid must be nonempty and positive")
        return v


class AnalysisConfig(_Strict):
    slope_alpha_min: float | None = None
    departure_threshold: float = Field(default=DEPARTURE_THRESHOLD, gt=0)
    cloud_pairs: list[tuple[int, int]] | None = None
    cloud_max_particles: int = Field(default=CLOUD_MAX_PARTICLES, ge=1)


class EnsembleSection(_Strict):
    n_particles: int = Field(default=N_PARTICLES, ge=1)
    n_steps: int = Field(default=N_STEPS, ge=1)
    burn_in_fraction: float = Field(default=BURN_IN_FRACTION, ge=0, lt=1)
    seeds: list[int] = Field(default_factory=lambda: [0])
    init: InitSpec = Field(default_factory=InitSpec)
    particle_block_size: int = Field(default=PARTICLE_BLOCK_SIZE, ge=1)


class ExperimentConfig(_Strict):
    """Everything one subcommand needs to reproduce its artifacts."""
    objective: ObjectiveSpec = Field(default_factory=ObjectiveSpec)
    dynamics: DynamicsConfig = Field(default_factory=DynamicsConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    ensemble: EnsembleSection = Field(default_factory=EnsembleSection)
    grids: GridsConfig = Field(default_factory=GridsConfig)
    inner: InnerConfig = Field(default_factory=InnerConfig)
    analysis: AnalysisConfig = Field(default_factory=AnalysisConfig)
    output_dir: str = "outputs"
    reference_cache_dir: str | None = None

    @model_validator(mode="after")
    def _window_long_enough(self) -> ExperimentConfig:
        length = self.ensemble.n_steps + 1
        window = length - int(length * self.ensemble.burn_in_fraction)
        if window < MIN_STATIONARY_SAMPLES:
            raise ValueError(f"burn-in leaves {window} stationary samples; need >= {MIN_STATIONARY_SAMPLES}")
        return self

    def ensemble_config(self) -> EnsembleConfig:
        """Merge the ensemble section with the alpha grid."""
        return EnsembleConfig(alpha_grid=list(self.grids.alpha), **self.ensemble.model_dump())

    def resolved_rho(self) -> float:
        if self.noise.rho is not None:
            return self.noise.rho
        return get_default_rho(self.objective.kind.value)


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    """Parse a YAML experiment file into a validated ExperimentConfig."""
    from exceptions import ConfigurationError
    from utils.error_handler import handle_validation_error

    p = Path(path)
    if not p.exists():
        raise ConfigurationError(f"Config file not found: {path}")
    try:
        raw: Any = yaml.safe_load(p.read_text(encoding="utf-8")) or {}
        return ExperimentConfig.model_validate(raw)
    except (ValidationError, yaml.YAMLError) as e:
        raise handle_validation_error(e, source=str(p)) from e


def parse_experiment_config(text: str) -> ExperimentConfig:
    """Parse YAML text (inverse of dump_experiment_config)."""
    from utils.error_handler import handle_validation_error

    try:
        return ExperimentConfig.model_validate(yaml.safe_load(text) or {})
    except (ValidationError, yaml.YAMLError) as e:
        raise handle_validation_error(e) from e


def dump_experiment_config(cfg: ExperimentConfig) -> str:
    """Serialize to YAML with every field explicit."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=False)
