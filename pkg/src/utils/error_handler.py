"""Graceful error handling for solver and experiment failures with user-friendly messages."""
from __future__ import annotations

import sys

import structlog

logger = structlog.get_logger(__name__)


class IronError(Exception):
    """Base class for iron-fi errors with user-friendly messaging."""

    def __init__(self, error_type: str, message: str, details: str = "", is_retryable: bool = False):
        self.error_type = error_type
        self.message = message
        self.details = details
        self.is_retryable = is_retryable
        super().__init__(self.message)

    def get_user_message(self) -> str:
        """Return a user-friendly error message."""
        msg = f"\n❌ {self.message}"
        if self.details:
            msg += f"\n   Details: {self.details}"
        if self.is_retryable:
            msg += "\n   💡 Tip: loosen the residual tolerance or raise inner.max_iters and rerun."
        return msg


def handle_validation_error(error: Exception, source: str = "") -> IronError:
    """Convert a pydantic/YAML failure into a configuration error."""
    from exceptions import ConfigurationError

    text = str(error)
    first_line = text.splitlines()[0] if text else type(error).__name__
    where = f" in {source}" if source else ""
    return ConfigurationError(
        message=f"Invalid experiment configuration{where}",
        details=first_line[:200] if len(text.splitlines()) <= 1 else text[:400],
    )


def exit_with_error(error: IronError, context: str = "") -> int:
    """Log error and return a nonzero exit code with a user-friendly message."""
    logger.error(
        "command_failed",
        error_type=error.error_type,
        message=error.message,
        details=error.details,
        context=context,
    )

    print(error.get_user_message(), file=sys.stderr)

    print("\n📋 Next steps:", file=sys.stderr)
    if error.error_type == "CONFIGURATION":
        print("   1. Check the experiment file against wiki/Configuration.md", file=sys.stderr)
        print("   2. Run `iron-fi selftest` to confirm the build itself is healthy", file=sys.stderr)
    elif error.is_retryable:
        print("   1. Adjust the inner solver settings in the experiment file", file=sys.stderr)
        print("   2. Run the same command again", file=sys.stderr)
    else:
        print("   1. Inspect the details above and the log output", file=sys.stderr)
        print("   2. Rerun with --log-level DEBUG for per-run diagnostics", file=sys.stderr)

    print("", file=sys.stderr)
    return 1
