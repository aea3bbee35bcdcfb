"""Built-in invariant checks on random instances."""
from selftest.models import CheckResult, SelftestReport
from selftest.runner import format_report, run_selftest

__all__ = ["CheckResult", "SelftestReport", "format_report", "run_selftest"]
