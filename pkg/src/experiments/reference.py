"""High-accuracy reference minimizer (full-batch damped Newton)."""
from __future__ import annotations

from pathlib import Path

import numpy as np
import scipy.linalg as sla
import structlog

from cache.reference_cache import cache_reference, get_cached_reference, reference_key
from config.loader import get_reference_config
from exceptions import ReferenceMinimizerError
from models.config import ObjectiveSpec
from models.reference import ReferenceEntry
from objectives.base import Objective

logger = structlog.get_logger(__name__)

_ref = get_reference_config()
GRAD_TOL = float(_ref.get("grad_tol", 1e-12))
MAX_NEWTON = int(_ref.get("max_newton", 100))
ARMIJO_C = float(_ref.get("armijo_c", 1e-4))


def _newton(obj: Objective, tol: float, max_newton: int, x0: np.ndarray | None) -> tuple[np.ndarray, float, int]:
    x = np.zeros(obj.dim) if x0 is None else np.array(x0, dtype=float)
    g = obj.gradient(x)
    g_norm = float(np.linalg.norm(g))
    for it in range(max_newton):
        if g_norm <= tol:
            return x, g_norm, it
        try:
            d = sla.cho_solve(sla.cho_factor(obj.hessian(x)), -g)
        except sla.LinAlgError:
            d = -g
        slope = float(g @ d)
        if slope >= 0:
            d, slope = -g, -float(g @ g)
        f0 = obj.value(x)
        t = 1.0
        # below float resolution of f the Armijo test is noise; take the full step
        if -slope > 1e-12 * (1.0 + abs(f0)):
            while obj.value(x + t * d) > f0 + ARMIJO_C * t * slope and t > 1e-12:
                t *= 0.5
        x = x + t * d
        g = obj.gradient(x)
        g_norm = float(np.linalg.norm(g))
    return x, g_norm, max_newton


def reference_minimizer(
    obj: Objective,
    tol: float | None = None,
    *,
    max_newton: int | None = None,
    x0: np.ndarray | None = None,
) -> np.ndarray:
    """Newton with Armijo backtracking on grad f to ||grad f|| <= tol.

    Raises:
        ReferenceMinimizerError: tolerance not reached within max_newton steps
    """
    tol = GRAD_TOL if tol is None else tol
    max_newton = MAX_NEWTON if max_newton is None else max_newton
    x, g_norm, iters = _newton(obj, tol, max_newton, x0)
    if g_norm > tol:
        raise ReferenceMinimizerError(g_norm, iters, context={"objective": repr(obj), "tol": tol})
    logger.info("reference_minimizer_done", objective=repr(obj), grad_norm=g_norm, iterations=iters)
    return x


def cached_reference_minimizer(
    obj: Objective, spec: ObjectiveSpec, cache_dir: Path | None = None, tol: float | None = None
) -> np.ndarray:
    """reference_minimizer, computed once per objective spec and stored on disk."""
    tol = GRAD_TOL if tol is None else tol
    key = reference_key(spec, tol)
    entry = get_cached_reference(key, cache_dir)
    if entry is not None and len(entry.x_star) == obj.dim:
        x = np.asarray(entry.x_star)
        if float(np.linalg.norm(obj.gradient(x))) <= tol:
            logger.info("reference_cache_hit", key=key)
            return x
        logger.warning("reference_cache_stale", key=key)
    x, g_norm, iters = _newton(obj, tol, MAX_NEWTON, None)
    if g_norm > tol:
        raise ReferenceMinimizerError(g_norm, iters, context={"objective": repr(obj), "tol": tol})
    cache_reference(
        ReferenceEntry(
            key=key,
            objective_kind=spec.kind.value,
            x_star=x.tolist(),
            grad_norm=g_norm,
            iterations=iters,
            tol=tol,
        ),
        cache_dir,
    )
    return x
