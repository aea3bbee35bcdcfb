from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Optional

import structlog
from dotenv import load_dotenv

from experiments.runners import run_logcosh_sim, run_logreg_sweep, run_quad_lyapunov, run_quad_sim
from models.config import ExperimentConfig, load_experiment_config
from selftest.runner import format_report, run_selftest
from utils.error_handler import IronError, exit_with_error


logger = logging.getLogger(__name__)

Runner = Callable[[ExperimentConfig, Optional[Path], int], list[Path]]

EXPERIMENTS: dict[str, tuple[Runner, str, list[str]]] = {
    "quad-sim": (
        run_quad_sim,
        "Quadratic ensembles: MSE bias-variance series and particle clouds",
        ["Build the quadratic objective and its minimizer", "Run one ensemble per (alpha, seed)"],
    ),
    "quad-lyapunov": (
        run_quad_lyapunov,
        "Quadratic fixed-gamma: Monte Carlo alpha*MSE against the exact stationary curve",
        ["Solve the per-eigendirection Lyapunov systems", "Run one ensemble per (alpha, seed)"],
    ),
    "logreg-sweep": (
        run_logreg_sweep,
        "Ridge logistic: stationary MSE over (alpha, delta) and the log-log slope fit",
        ["Compute the reference minimizer", "Sweep every (alpha, delta, seed)", "Fit the large-alpha slope"],
    ),
    "logcosh-sim": (
        run_logcosh_sim,
        "Nonconvex log-cosh: particle clouds and spread over time",
        ["Build the planted log-cosh objective", "Run one ensemble per (alpha, seed)"],
    ),
}


def _env_threads() -> int:
    try:
        return max(1, int(os.getenv("IRON_THREADS", "1")))
    except ValueError:
        return 1


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--seed",
        dest="seed",
        type=int,
        default=None,
        help="Master seed; replaces ensemble.seeds and noise.seed (selftest: instance seed).",
    )
    sub.add_argument(
        "--log-level",
        dest="log_level",
        default=None,
        help="Logging level (DEBUG, INFO, WARNING, ERROR; default: $IRON_LOG_LEVEL or INFO)",
    )
    sub.add_argument(
        "--dotenv",
        dest="dotenv_path",
        default=".env",
        help="Path to .env file to load (default: .env at repo root)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the main CLI parser with one subcommand per experiment plus selftest."""
    parser = argparse.ArgumentParser(
        prog="iron-fi",
        description="Inertial implicit stochastic dynamics: experiments and invariant checks",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    for name, (_, help_text, _) in EXPERIMENTS.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument(
            "--config",
            dest="config_path",
            required=True,
            help="Path to the experiment YAML file (see config/experiments/).",
        )
        sub.add_argument(
            "--out",
            dest="out_dir",
            default=None,
            help="Output directory; overrides output_dir from the config.",
        )
        sub.add_argument(
            "--threads",
            dest="threads",
            type=int,
            default=None,
            help="Worker threads for per-particle runs (default: $IRON_THREADS or 1).",
        )
        _add_common_flags(sub)

    selftest_parser = subparsers.add_parser(
        "selftest",
        help="Run the invariant checks on seeded random instances",
    )
    selftest_parser.add_argument(
        "--instances",
        dest="instances",
        type=int,
        default=None,
        help="Random instances per check (default from iron_config.yaml).",
    )
    _add_common_flags(selftest_parser)

    return parser


def apply_overrides(cfg: ExperimentConfig, seed: int | None) -> ExperimentConfig:
    """Apply the --seed override to a loaded config."""
    if seed is None:
        return cfg
    return cfg.model_copy(
        update={
            "noise": cfg.noise.model_copy(update={"seed": seed}),
            "ensemble": cfg.ensemble.model_copy(update={"seeds": [seed]}),
        }
    )


def run_experiment(
    command: str,
    config_path: str,
    out_dir: str | None = None,
    threads: int = 1,
    seed: int | None = None,
) -> int:
    runner, help_text, plan = EXPERIMENTS[command]
    cfg = apply_overrides(load_experiment_config(config_path), seed)
    target = Path(out_dir) if out_dir else Path(cfg.output_dir)

    logger.info("[plan] %s", help_text)
    for line in plan:
        logger.info("[plan] - %s", line)
    logger.info(
        "[run] config=%s out=%s threads=%s seeds=%s alphas=%s",
        config_path,
        str(target),
        threads,
        cfg.ensemble.seeds,
        cfg.grids.alpha,
    )

    written = runner(cfg, target, threads)
    for path in written:
        logger.info("[output] wrote=%s", str(path))
    return 0


def run_selftest_command(instances: int | None = None, seed: int | None = None) -> int:
    logger.info("[plan] Invariant selftest")
    logger.info("[run] instances=%s seed=%s", instances or "default", seed if seed is not None else "default")
    report = run_selftest(n_instances=instances, seed=seed)
    print(format_report(report))
    if not report.passed:
        logger.error("[selftest] failed checks=%s", report.failed_checks)
        return 1
    return 0


def _setup_logging(log_level: str) -> None:
    """Configure stdlib logging and the structlog level filter."""
    level = getattr(logging, log_level.upper(), logging.INFO)
    logging.basicConfig(level=level)
    structlog.configure(wrapper_class=structlog.make_filtering_bound_logger(level))


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 1

    # .env first so its IRON_* values can fill unset flags
    load_dotenv(args.dotenv_path)
    _setup_logging(args.log_level or os.getenv("IRON_LOG_LEVEL", "INFO"))

    try:
        if args.command == "selftest":
            return run_selftest_command(instances=args.instances, seed=args.seed)
        if args.command in EXPERIMENTS:
            threads = args.threads if args.threads is not None else _env_threads()
            return run_experiment(
                args.command,
                config_path=args.config_path,
                out_dir=args.out_dir,
                threads=max(1, threads),
                seed=args.seed,
            )
    except IronError as e:
        return exit_with_error(e, context=args.command)

    parser.print_help()
    return 1


if __name__ == "__main__":
    try:
        raise SystemExit(main())
    except Exception as e:
        logger.exception("unexpected_error: %s", e)
        print(f"\n❌ Unexpected error: {str(e)}", file=sys.stderr)
        print("\n📋 Please report this issue with the error details above.", file=sys.stderr)
        raise SystemExit(1)
