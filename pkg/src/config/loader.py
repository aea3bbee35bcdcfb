"""Configuration loader for iron-fi library defaults.

The packaged iron_config.yaml is always read. A site file named by the
IRON_CONFIG environment variable is merged over it key by key, so it only
needs the keys it changes. Modules read their defaults at import time:
set IRON_CONFIG before launching.
"""
from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Optional

import structlog
import yaml

logger = structlog.get_logger(__name__)

CONFIG_FILE = Path(__file__).parent / "iron_config.yaml"
OVERRIDE_ENV = "IRON_CONFIG"


def _read_yaml(path: Path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: top level must be a mapping")
    return data


def merge_sections(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Recursive dict merge; override wins on leaves."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_sections(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigLoader:
    """Process-wide view of the library defaults."""

    _instance: Optional[ConfigLoader] = None
    _config: Optional[dict[str, Any]] = None

    def __new__(cls) -> ConfigLoader:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self._load_config()

    def _load_config(self) -> None:
        if CONFIG_FILE.exists():
            config = _read_yaml(CONFIG_FILE)
            logger.debug("config_loaded", path=str(CONFIG_FILE))
        else:
            logger.warning("config_file_not_found", path=str(CONFIG_FILE))
            config = {}

        override = os.getenv(OVERRIDE_ENV)
        if override:
            path = Path(override)
            if path.exists():
                config = merge_sections(config, _read_yaml(path))
                logger.info("config_override_loaded", path=str(path))
            else:
                logger.warning("config_override_not_found", path=override)
        self._config = config

    def get(self, key: str, default: Any = None) -> Any:
        """Get a value by dot-notation key, e.g. ``get("inner.linear_solve.direct_max_dim")``."""
        value: Any = self._config or {}
        for k in key.split("."):
            if not isinstance(value, dict) or value.get(k) is None:
                return default
            value = value[k]
        return value

    def get_section(self, section: str) -> dict[str, Any]:
        return self.get(section, default={})

    def reload(self) -> None:
        """Re-read the packaged file and the override."""
        self._config = None
        self._load_config()


_config = ConfigLoader()


def get_config() -> ConfigLoader:
    """Get the global config instance."""
    return _config


def get_inner_defaults() -> dict[str, Any]:
    """Get inner solver defaults section."""
    return _config.get_section("inner")


def get_fallback_config() -> dict[str, Any]:
    """Get nonconvex fallback damping parameters."""
    return _config.get("inner.fallback", default={})


def get_reference_config() -> dict[str, Any]:
    """Get reference minimizer parameters."""
    return _config.get_section("reference")


def get_ensemble_defaults() -> dict[str, Any]:
    """Get ensemble defaults section."""
    return _config.get_section("ensemble")


def get_min_stationary_samples() -> int:
    """Minimum number of post-burn-in samples in a stationary window."""
    return int(_config.get("ensemble.min_stationary_samples", 10))


def get_objective_defaults(kind: str) -> dict[str, Any]:
    """Get documented default parameters for an objective kind.

    Args:
        kind: quadratic, ridge_logistic or log_cosh

    Returns:
        Dictionary of constructor parameters
    """
    return _config.get(f"objectives.{kind}", default={})


def get_default_rho(kind: str) -> float:
    """Get the default isotropic noise level for an objective kind."""
    key = {"quadratic": "quadratic_rho", "ridge_logistic": "logistic_rho"}.get(kind, "log_cosh_rho")
    return float(_config.get(f"noise.{key}", 0.1))


def get_metrics_config() -> dict[str, Any]:
    """Get metric thresholds (CI z-score, departure threshold, slope range)."""
    return _config.get_section("metrics")


def get_selftest_config() -> dict[str, Any]:
    """Get selftest instance counts and seed."""
    return _config.get_section("selftest")


def get_float_format() -> str:
    """Get CSV float format (round-trip safe)."""
    return _config.get("output.float_format", "%.17g")


def get_default_mu_dyn() -> float:
    """Dynamics mu for objectives whose strong-convexity modulus is 0."""
    return float(_config.get("dynamics.default_mu_dyn", 1.0))
