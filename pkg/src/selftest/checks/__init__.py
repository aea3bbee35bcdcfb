"""Invariant checks run by ``iron-fi selftest``."""
from selftest.checks.contraction import check_resolvent_contraction
from selftest.checks.decomposition import check_mse_decomposition
from selftest.checks.lyapunov import check_lyapunov
from selftest.checks.newton_exact import check_newton_exact
from selftest.checks.recursion import check_recursion_matches_step
from selftest.checks.residual_bound import check_residual_bound
from selftest.checks.step_params import check_step_params

__all__ = [
    "check_resolvent_contraction",
    "check_mse_decomposition",
    "check_lyapunov",
    "check_newton_exact",
    "check_recursion_matches_step",
    "check_residual_bound",
    "check_step_params",
]
