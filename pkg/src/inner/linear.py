"""Linear solves for the LM system (I + lam H) s = -g."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla

MatVec = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class LinearSolveResult:
    x: np.ndarray
    iters: int
    ok: bool
    negative_curvature: bool = False


def solve_direct(matrix: np.ndarray, rhs: np.ndarray) -> LinearSolveResult:
    """Cholesky solve; ok=False when the matrix is not positive definite."""
    try:
        factor = sla.cho_factor(matrix, lower=True, check_finite=False)
    except (sla.LinAlgError, ValueError):
        return LinearSolveResult(x=np.zeros_like(rhs), iters=0, ok=False, negative_curvature=True)
    return LinearSolveResult(x=sla.cho_solve(factor, rhs, check_finite=False), iters=1, ok=True)


def conjugate_gradient(matvec: MatVec, rhs: np.ndarray, rel_tol: float, max_iter: int) -> LinearSolveResult:
    """Matrix-free CG from zero, stopping at ||r|| <= rel_tol ||rhs||.

    Stops with negative_curvature=True as soon as a direction with
    p^T J p <= 0 appears, since J is then not SPD and CG is undefined.
    """
    x = np.zeros_like(rhs)
    r = rhs.copy()
    p = r.copy()
    rs = float(r @ r)
    target = rel_tol * np.sqrt(rs)
    if rs == 0.0:
        return LinearSolveResult(x=x, iters=0, ok=True)

    for it in range(1, max_iter + 1):
        jp = matvec(p)
        curv = float(p @ jp)
        if curv <= 0.0 or not np.isfinite(curv):
            return LinearSolveResult(x=x, iters=it, ok=False, negative_curvature=True)
        step = rs / curv
        x = x + step * p
        r = r - step * jp
        rs_new = float(r @ r)
        if np.sqrt(rs_new) <= target:
            return LinearSolveResult(x=x, iters=it, ok=True)
        p = r + (rs_new / rs) * p
        rs = rs_new
    # max_iter reached: x still reduces the quadratic model, usable as an inexact step
    return LinearSolveResult(x=x, iters=max_iter, ok=True)


def estimate_min_eigenvalue(matvec: MatVec, dim: int, iterations: int) -> float:
    """Smallest eigenvalue of a symmetric operator by shifted power iteration.

    ``iterations`` power steps estimate the spectral norm sigma; the same
    number on sigma I - J then gives sigma - lambda_min.
    """
    start = np.random.default_rng(0).standard_normal(dim)
    start /= np.linalg.norm(start)

    q = start.copy()
    sigma = 0.0
    for _ in range(iterations):
        w = matvec(q)
        sigma = float(np.linalg.norm(w))
        if sigma == 0.0:
            return 0.0
        q = w / sigma

    q = start.copy()
    top = 0.0
    for _ in range(iterations):
        w = sigma * q - matvec(q)
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            break
        q = w / nrm
        top = float(q @ (sigma * q - matvec(q)))
    return sigma - top
