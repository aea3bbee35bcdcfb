"""Pydantic models for the selftest report."""
from __future__ import annotations

from datetime import datetime, timezone

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """Outcome of one invariant check."""
    name: str
    passed: bool
    instances: int = 0
    worst: float = 0.0  # largest observed violation measure
    threshold: float = 0.0
    detail: str = ""
    duration_s: float = 0.0


class SelftestReport(BaseModel):
    """All check results for one selftest run."""
    results: list[CheckResult] = Field(default_factory=list)
    seed: int = 0
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    total_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failed_checks(self) -> list[str]:
        return [r.name for r in self.results if not r.passed]
