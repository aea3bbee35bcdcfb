"""Resolvent (proximal) solvers for the implicit outer step."""
from inner.closed_form import prox_quadratic_batch, prox_quadratic_closed_form
from inner.solver import InnerResult, residual, residual_error_bound, solve_prox

__all__ = [
    "InnerResult",
    "residual",
    "residual_error_bound",
    "solve_prox",
    "prox_quadratic_closed_form",
    "prox_quadratic_batch",
]
