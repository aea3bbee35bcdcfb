"""LM/Newton resolvent solver: x = prox_{lam f}(c) as the root of g(u) = u - c + lam grad f(u)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog

from config.loader import get_fallback_config
from exceptions import InvalidInputError
from inner.linear import (
    LinearSolveResult,
    MatVec,
    conjugate_gradient,
    estimate_min_eigenvalue,
    solve_direct,
)
from models.config import InnerConfig
from models.shared import Curvature, LinearSolveKind
from objectives.base import Objective

logger = structlog.get_logger(__name__)

_fallback = get_fallback_config()
POWER_ITERATIONS = int(_fallback.get("power_iterations", 5))
FALLBACK_MARGIN = float(_fallback.get("margin", 0.1))
MAX_DOUBLINGS = int(_fallback.get("max_doublings", 8))


@dataclass(frozen=True)
class InnerResult:
    """Outcome of one resolvent solve.

    iters counts Newton/LM steps; residual_evals counts evaluations of g,
    including backtracking trials. error_bound is residual_norm/(1 + lam mu),
    or inf when the objective has mu = 0.
    """
    x: np.ndarray
    residual_norm: float
    iters: int
    cg_iters_total: int
    converged: bool
    error_bound: float
    residual_evals: int = 1
    backtracks: int = 0
    stalls: int = 0
    fallback_used: bool = False


def residual(obj: Objective, lam: float, c: np.ndarray, u: np.ndarray) -> np.ndarray:
    """g(u) = u - c + lam grad f(u); zero exactly at the resolvent point."""
    return u - c + lam * obj.gradient(u)


def residual_error_bound(residual_norm: float, lam: float, mu: float) -> float:
    if mu <= 0:
        return float("inf")
    return residual_norm / (1.0 + lam * mu)


def solve_prox(
    obj: Objective,
    lam: float,
    c: np.ndarray,
    u0: np.ndarray,
    cfg: InnerConfig | None = None,
) -> InnerResult:
    """Newton iteration on g with Jacobian J = I + lam H(u).

    Each step solves J s = -g directly (Cholesky) or by CG on Hessian-vector
    products, then halves s while ||g(u + s)|| > ||g(u)||. At least one step
    is always taken, so a loose tolerance still moves u0 toward the
    resolvent point. Returns the first iterate with ||g|| <= residual_tol,
    otherwise the best iterate seen with converged=False.

    Raises:
        InvalidInputError: lam <= 0, non-finite u0, or shape mismatch
    """
    cfg = cfg or InnerConfig()
    if not lam > 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    c = obj._check(c, "c")
    u = np.array(obj._check(u0, "u0"), dtype=float)
    if not np.all(np.isfinite(u)) or not np.all(np.isfinite(c)):
        raise InvalidInputError("solve_prox: non-finite u0 or center")

    tol = cfg.residual_tol
    g = residual(obj, lam, c, u)
    r_norm = float(np.linalg.norm(g))
    best_u, best_r = u, r_norm
    iters = cg_total = evals_backtracks = stalls = 0
    evals = 1
    fallback_used = False

    for i in range(cfg.max_iters + 1):
        if (r_norm <= tol and i > 0) or i == cfg.max_iters:
            break
        step, cg_iters, used_fallback = _lm_step(obj, lam, u, g, cfg)
        iters += 1
        cg_total += cg_iters
        fallback_used |= used_fallback

        trial = u + step
        g_trial = residual(obj, lam, c, trial)
        r_trial = float(np.linalg.norm(g_trial))
        evals += 1
        smallest = (trial, g_trial, r_trial)
        halvings = 0
        while r_trial > r_norm and halvings < cfg.max_backtracks:
            step = cfg.backtrack_beta * step
            halvings += 1
            trial = u + step
            g_trial = residual(obj, lam, c, trial)
            r_trial = float(np.linalg.norm(g_trial))
            evals += 1
            if r_trial < smallest[2]:
                smallest = (trial, g_trial, r_trial)
        evals_backtracks += halvings
        if r_trial > r_norm:
            stalls += 1
            trial, g_trial, r_trial = smallest
            logger.debug("backtracking_stalled", iter=i, residual=r_norm, best_trial=r_trial)

        u, g, r_norm = trial, g_trial, r_trial
        if r_norm < best_r:
            best_u, best_r = u, r_norm

    if r_norm <= tol:
        x, r_final = u, r_norm
    else:
        x, r_final = best_u, best_r
    converged = r_final <= tol
    return InnerResult(
        x=x,
        residual_norm=r_final,
        iters=iters,
        cg_iters_total=cg_total,
        converged=converged,
        error_bound=residual_error_bound(r_final, lam, obj.mu),
        residual_evals=evals,
        backtracks=evals_backtracks,
        stalls=stalls,
        fallback_used=fallback_used,
    )


def _lm_step(obj: Objective, lam: float, u: np.ndarray, g: np.ndarray, cfg: InnerConfig) -> tuple[np.ndarray, int, bool]:
    """Return (step, cg iterations, fallback used) for J s = -g."""
    if cfg.curvature == Curvature.DIAGONAL:
        d = 1.0 + lam * obj.hessian_diagonal(u)
        if np.all(d > 0):
            return -g / d, 0, False
        # exact shift for a diagonal model
        eps = max(0.0, -(float(d.min()) - 1.0) + FALLBACK_MARGIN)
        logger.warning("diagonal_lm_damped", epsilon=eps, min_diag=float(d.min()))
        return -g / (d + eps), 0, True

    use_direct = cfg.linear_solve.kind == LinearSolveKind.DIRECT or (
        cfg.linear_solve.kind == LinearSolveKind.AUTO and obj.dim <= cfg.linear_solve.direct_max_dim
    )

    def matvec(p: np.ndarray) -> np.ndarray:
        return p + lam * obj.hvp(u, p)

    jac = None
    if use_direct:
        jac = np.eye(obj.dim) + lam * obj.hessian(u)
        result = solve_direct(jac, -g)
    else:
        result = conjugate_gradient(matvec, -g, cfg.linear_solve.cg_rel_tol, cfg.linear_solve.max_cg)
    if result.ok:
        return result.x, (0 if use_direct else result.iters), False

    return _damped_step(obj, lam, g, matvec, jac, cfg, result)


def _damped_step(
    obj: Objective,
    lam: float,
    g: np.ndarray,
    matvec: MatVec,
    jac: np.ndarray | None,
    cfg: InnerConfig,
    failed: LinearSolveResult,
) -> tuple[np.ndarray, int, bool]:
    """Solve (J + eps I) s = -g with eps = max(0, -lam lambda_min(H) + margin), doubling on failure.

    ``jac`` is the dense J on the direct path and None on the CG path.
    """
    cg_iters = 0 if jac is not None else failed.iters
    lam_h_min = estimate_min_eigenvalue(matvec, obj.dim, POWER_ITERATIONS) - 1.0
    eps = max(0.0, -lam_h_min + FALLBACK_MARGIN)

    for doubling in range(MAX_DOUBLINGS + 1):
        if jac is not None:
            result = solve_direct(jac + eps * np.eye(obj.dim), -g)
        else:
            shift = eps
            result = conjugate_gradient(
                lambda p: matvec(p) + shift * p,
                -g,
                cfg.linear_solve.cg_rel_tol,
                cfg.linear_solve.max_cg,
            )
            cg_iters += result.iters
        if result.ok:
            logger.warning("lm_fallback_damping", epsilon=eps, lam_h_min=lam_h_min, doublings=doubling)
            return result.x, cg_iters, True
        eps = max(2.0 * eps, FALLBACK_MARGIN)

    logger.warning("lm_fallback_exhausted", epsilon=eps, lam_h_min=lam_h_min)
    return -g / (1.0 + eps), cg_iters, True


@dataclass(frozen=True)
class BatchInnerResult:
    """Row-wise InnerResult fields for a cloud of independent solves."""
    x: np.ndarray
    residual_norm: np.ndarray
    iters: np.ndarray
    converged: np.ndarray
    error_bound: np.ndarray
    fallback_used: np.ndarray


def residual_batch(obj: Objective, lam: float, C: np.ndarray, U: np.ndarray) -> np.ndarray:
    return U - C + lam * obj.gradient_batch(U)


def solve_prox_batch(
    obj: Objective,
    lam: float,
    C: np.ndarray,
    U0: np.ndarray,
    cfg: InnerConfig | None = None,
) -> BatchInnerResult:
    """solve_prox for every row of C at once, with dense Jacobians.

    Each row follows its own Newton path: at least one step, per-row
    backtracking and stopping, best iterate kept on failure. A row whose
    J = I + lam H is not positive definite is shifted by
    eps = max(0, -lam lambda_min(H) + margin) with the exact smallest
    eigenvalue, which leaves J + eps I with spectrum >= 1 + margin.

    Raises:
        InvalidInputError: lam <= 0, non-finite input, or shape mismatch
    """
    cfg = cfg or InnerConfig()
    if not lam > 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    C = obj._check_batch(C, "C")
    U = np.array(obj._check_batch(U0, "U0"), dtype=float)
    if C.shape != U.shape:
        raise InvalidInputError(f"solve_prox_batch: C {C.shape} and U0 {U.shape} differ")
    if not np.all(np.isfinite(U)) or not np.all(np.isfinite(C)):
        raise InvalidInputError("solve_prox_batch: non-finite U0 or centers")

    tol = cfg.residual_tol
    n, dim = U.shape
    eye = np.eye(dim)
    G = residual_batch(obj, lam, C, U)
    r = np.linalg.norm(G, axis=1)
    best_U, best_r = U.copy(), r.copy()
    iters = np.zeros(n, dtype=int)
    fallback = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)

    for _ in range(cfg.max_iters):
        rows = np.flatnonzero(active)
        if rows.size == 0:
            break
        u, g, r_now = U[rows], G[rows], r[rows]
        J = eye + lam * obj.hessian_batch(u)
        j_min = np.linalg.eigvalsh(J)[:, 0]
        damped = j_min <= 0.0
        eps = np.where(damped, -(j_min - 1.0) + FALLBACK_MARGIN, 0.0)
        S = np.linalg.solve(J + eps[:, None, None] * eye, -g[:, :, None])[:, :, 0]
        if damped.any():
            logger.debug("lm_fallback_damping_batch", rows=int(damped.sum()), max_epsilon=float(eps.max()))
        fallback[rows] |= damped
        iters[rows] += 1

        trial = u + S
        g_trial = residual_batch(obj, lam, C[rows], trial)
        r_trial = np.linalg.norm(g_trial, axis=1)
        small_u, small_g, small_r = trial.copy(), g_trial.copy(), r_trial.copy()
        worse = r_trial > r_now
        halvings = 0
        while worse.any() and halvings < cfg.max_backtracks:
            halvings += 1
            S[worse] *= cfg.backtrack_beta
            trial[worse] = u[worse] + S[worse]
            g_trial[worse] = residual_batch(obj, lam, C[rows[worse]], trial[worse])
            r_trial[worse] = np.linalg.norm(g_trial[worse], axis=1)
            better = worse & (r_trial < small_r)
            small_u[better], small_g[better], small_r[better] = trial[better], g_trial[better], r_trial[better]
            worse = r_trial > r_now
        # stalled rows take their smallest trial
        trial[worse], g_trial[worse], r_trial[worse] = small_u[worse], small_g[worse], small_r[worse]

        U[rows], G[rows], r[rows] = trial, g_trial, r_trial
        improved = r_trial < best_r[rows]
        best_U[rows[improved]] = trial[improved]
        best_r[rows[improved]] = r_trial[improved]
        active[rows] = r_trial > tol

    done = r <= tol
    X = np.where(done[:, None], U, best_U)
    r_final = np.where(done, r, best_r)
    if obj.mu > 0:
        bound = r_final / (1.0 + lam * obj.mu)
    else:
        bound = np.full(n, np.inf)
    return BatchInnerResult(
        x=X,
        residual_norm=r_final,
        iters=iters,
        converged=r_final <= tol,
        error_bound=bound,
        fallback_used=fallback,
    )
