"""Random problem instances shared by the checks."""
from __future__ import annotations

import numpy as np

from objectives.linalg import random_orthogonal
from objectives.quadratic import Quadratic


def random_quadratic(rng: np.random.Generator, max_dim: int = 10) -> Quadratic:
    n = int(rng.integers(1, max_dim + 1))
    eigenvalues = 10.0 ** rng.uniform(-1, 1, size=n)
    return Quadratic.from_spectrum(eigenvalues, rotation=random_orthogonal(n, rng), b=rng.standard_normal(n))
