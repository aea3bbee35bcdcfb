"""Build objectives from experiment-file specs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog

from exceptions import ConfigurationError
from models.config import ObjectiveSpec
from models.shared import ObjectiveKind
from objectives.base import Objective
from objectives.data import planted_log_cosh, synthetic_logistic
from objectives.log_cosh import LogCosh
from objectives.quadratic import Quadratic

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class BuiltObjective:
    """An objective plus what the experiment layer needs to know about it.

    x_star is known analytically for quadratics only; logistic minimizers
    come from the reference solver, log-cosh has none. ``planted`` is the
    log-cosh planted minimizer or the logistic true weight vector.
    """
    objective: Objective
    x_star: np.ndarray | None = None
    planted: np.ndarray | None = None


def build_objective(spec: ObjectiveSpec) -> BuiltObjective:
    if spec.kind == ObjectiveKind.QUADRATIC:
        q = spec.quadratic
        if q.matrix is not None:
            b = np.asarray(q.b, dtype=float) if q.b is not None else q.b_scale * np.ones(len(q.matrix))
            obj = Quadratic(np.asarray(q.matrix, dtype=float), b)
        else:
            obj = Quadratic.random_rotated(q.eigenvalues, q.rotation_seed, b_scale=q.b_scale)
        built = BuiltObjective(obj, x_star=obj.x_star)
    elif spec.kind == ObjectiveKind.RIDGE_LOGISTIC:
        r = spec.ridge_logistic
        obj, w_true = synthetic_logistic(r.dim, r.n_samples, r.lambda_reg, r.data_seed)
        built = BuiltObjective(obj, planted=w_true)
    elif spec.kind == ObjectiveKind.LOG_COSH:
        lc = spec.log_cosh
        if lc.a_matrix is not None:
            if lc.b is None:
                raise ConfigurationError("log_cosh.a_matrix requires log_cosh.b")
            built = BuiltObjective(LogCosh(np.asarray(lc.a_matrix), np.asarray(lc.b)))
        else:
            obj, x0 = planted_log_cosh(lc.m, lc.n, lc.data_seed)
            built = BuiltObjective(obj, planted=x0)
    else:  # pragma: no cover - enum is exhaustive
        raise ConfigurationError(f"Unknown objective kind: {spec.kind}")

    logger.info("objective_built", kind=spec.kind.value, dim=built.objective.dim, mu=built.objective.mu)
    return built
