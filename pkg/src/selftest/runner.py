"""Run every invariant check on seeded random instances and collect a report."""
from __future__ import annotations

import time
from typing import Callable

import numpy as np
import structlog

from config.loader import get_selftest_config
from selftest.checks import (
    check_lyapunov,
    check_mse_decomposition,
    check_newton_exact,
    check_recursion_matches_step,
    check_residual_bound,
    check_resolvent_contraction,
    check_step_params,
)
from selftest.models import CheckResult, SelftestReport

logger = structlog.get_logger(__name__)

Check = Callable[[np.random.Generator, int], CheckResult]

CHECKS: list[Check] = [
    check_step_params,
    check_resolvent_contraction,
    check_newton_exact,
    check_residual_bound,
    check_recursion_matches_step,
    check_lyapunov,
    check_mse_decomposition,
]

_defaults = get_selftest_config()
N_RANDOM_INSTANCES = int(_defaults.get("n_random_instances", 100))
SELFTEST_SEED = int(_defaults.get("seed", 20240917))


def _run_check(index: int, check: Check, seed: int, n_instances: int) -> CheckResult:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    start = time.perf_counter()
    try:
        result = check(rng, n_instances)
    except Exception as e:  # a crashing check is a failing check
        logger.exception("selftest_check_crashed", check=check.__name__)
        result = CheckResult(
            name=check.__name__.removeprefix("check_"),
            passed=False,
            detail=f"{type(e).__name__}: {e}",
        )
    return result.model_copy(update={"duration_s": time.perf_counter() - start})


def run_selftest(
    n_instances: int | None = None,
    seed: int | None = None,
    checks: list[Check] | None = None,
) -> SelftestReport:
    """Run each check with its own seeded generator."""
    n_instances = N_RANDOM_INSTANCES if n_instances is None else n_instances
    seed = SELFTEST_SEED if seed is None else seed
    start = time.perf_counter()
    report = SelftestReport(seed=seed)
    for i, check in enumerate(checks or CHECKS):
        result = _run_check(i, check, seed, n_instances)
        logger.info(
            "selftest_check",
            check=result.name,
            passed=result.passed,
            worst=result.worst,
            threshold=result.threshold,
            seconds=round(result.duration_s, 3),
        )
        report.results.append(result)
    report.total_seconds = time.perf_counter() - start
    return report


def format_report(report: SelftestReport) -> str:
    """Plain-text table, one row per check."""
    width = max((len(r.name) for r in report.results), default=5)
    lines = [f"{'check':<{width}}  status  {'worst':>10}  {'threshold':>10}  seconds"]
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{r.name:<{width}}  {status:<6}  {r.worst:>10.3e}  {r.threshold:>10.1e}  {r.duration_s:7.2f}")
        if r.detail and not r.passed:
            lines.append(f"{'':<{width}}  {r.detail}")
    verdict = "all checks passed" if report.passed else f"FAILED: {', '.join(report.failed_checks)}"
    lines.append(f"{verdict} (seed={report.seed}, {report.total_seconds:.1f}s)")
    return "\n".join(lines)
