"""Per-eigendirection linear state-space form of the fixed-gamma quadratic dynamics.

Along an eigenvector with eigenvalue a, the errors e = x - x*, w = v - x*
obey (e, w)+ = M (e, w) + g sqrt(noise_var) eta with scalar eta ~ N(0, 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from exceptions import InvalidInputError
from iron.params import validate_alpha


def spectral_radius_2x2(m: np.ndarray) -> float:
    """Exact spectral radius from the characteristic polynomial z^2 - t z + d."""
    t = float(m[0, 0] + m[1, 1])
    d = float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    disc = 0.25 * t * t - d
    if disc >= 0.0:
        root = math.sqrt(disc)
        return max(abs(0.5 * t + root), abs(0.5 * t - root))
    # complex pair, |z|^2 = d
    return math.sqrt(d)


@dataclass(frozen=True)
class EigenRecursion:
    a: float
    alpha: float
    gamma: float
    mu: float
    rho: float
    tau: float
    lam: float
    r: float
    s: float
    M: np.ndarray
    g: np.ndarray
    noise_var: float

    @property
    def Q(self) -> np.ndarray:
        return self.noise_var * np.outer(self.g, self.g)

    @property
    def spectral_radius(self) -> float:
        return spectral_radius_2x2(self.M)

    @property
    def stable(self) -> bool:
        return self.spectral_radius < 1.0

    def simulate(self, e0: float, w0: float, etas: np.ndarray) -> np.ndarray:
        """Iterate the recursion with the given standard-normal draws; returns (len(etas)+1, 2)."""
        out = np.empty((len(etas) + 1, 2))
        out[0] = (e0, w0)
        scale = math.sqrt(self.noise_var)
        for k, eta in enumerate(etas):
            out[k + 1] = self.M @ out[k] + scale * eta * self.g
        return out


def eigen_recursion(a: float, alpha: float, gamma: float, mu: float, rho: float) -> EigenRecursion:
    """Coefficients for one eigendirection.

    r = 1/(1 + lam a), s = 1 + tau,
    M = [[r tau/s, r/s], [(1 + 1/alpha) r tau/s - 1/alpha, (1 + 1/alpha) r/s]],
    g = r (1, 1 + 1/alpha), noise_var = alpha rho^2 / s^2.
    """
    alpha = validate_alpha(alpha)
    if not (a > 0 and gamma > 0 and mu > 0):
        raise InvalidInputError(f"eigen_recursion needs a, gamma, mu > 0; got a={a}, gamma={gamma}, mu={mu}")
    if rho < 0:
        raise InvalidInputError(f"rho must be >= 0, got {rho}")
    tau = 1.0 / alpha + mu / gamma
    s = 1.0 + tau
    lam = alpha / (gamma * s)
    r = 1.0 / (1.0 + lam * a)
    a1 = r * tau / s
    b1 = r / s
    grow = 1.0 + 1.0 / alpha
    m = np.array([[a1, b1], [grow * a1 - 1.0 / alpha, grow * b1]])
    g = r * np.array([1.0, grow])
    m.setflags(write=False)
    g.setflags(write=False)
    return EigenRecursion(
        a=float(a),
        alpha=alpha,
        gamma=float(gamma),
        mu=float(mu),
        rho=float(rho),
        tau=tau,
        lam=lam,
        r=r,
        s=s,
        M=m,
        g=g,
        noise_var=alpha * rho * rho / (s * s),
    )
