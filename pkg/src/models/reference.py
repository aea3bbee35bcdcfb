"""Cached reference-minimizer record."""
from __future__ import annotations

from pydantic import BaseModel, Field


class ReferenceEntry(BaseModel):
    """A full-batch Newton minimizer keyed by objective spec and tolerance."""
    key: str
    objective_kind: str
    x_star: list[float]
    grad_norm: float = Field(ge=0)
    iterations: int = Field(ge=0)
    tol: float = Field(gt=0)
