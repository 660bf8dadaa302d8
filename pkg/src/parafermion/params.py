"""Scalar parameters of the square-lattice O(n) loop model.

The model family is parametrised by a crossing angle ``lam`` (fixing the loop
fugacity through ``n = -2 cos 4 lam``) and a spectral angle ``u``.  The
observable carries a conformal spin ``sigma`` and lives on a rhombic embedding
with angle ``theta``.  All angles are in radians.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

_TOL = 1e-12


def fugacity_from_lambda(lam: float) -> float:
    """Loop fugacity ``n = -2 cos(4 lam)``."""
    return -2.0 * math.cos(4.0 * lam)


def lambda_from_fugacity(n: float, branch: str = "dilute") -> float:
    """Invert ``n = -2 cos(4 lam)`` on the dilute branch ``4 lam in (0, pi]``.

    ``n = -2`` sits on the open end of the branch (``lam = 0``) and is rejected
    along with anything outside ``[-2, 2]``.
    """
    if branch != "dilute":
        raise DomainError(f"unsupported branch {branch!r}; only 'dilute' is implemented")
    if not math.isfinite(n) or not -2.0 < n <= 2.0:
        raise DomainError(f"loop fugacity n={n!r} outside (-2, 2] for the dilute branch")
    return math.acos(-n / 2.0) / 4.0


def spin(lam: float) -> float:
    """Conformal spin of the parafermion, ``1 - 3 lam / pi``."""
    return 1.0 - 3.0 * lam / math.pi


def spectral_from_angle(sigma: float, theta: float) -> float:
    """Spectral parameter at which the observable is holomorphic for angle ``theta``."""
    return sigma * (theta - math.pi) + theta


def angle_from_spectral(sigma: float, u: float) -> float:
    """Inverse of :func:`spectral_from_angle`."""
    if sigma == -1.0:
        raise DomainError("sigma = -1 makes the angle/spectral relation degenerate")
    return (u + sigma * math.pi) / (1.0 + sigma)


def lambda_from_spin(sigma: float) -> float:
    """Crossing parameter on the critical manifold for a given spin."""
    return (1.0 - sigma) * math.pi / 3.0


@dataclass(frozen=True)
class LoopParams:
    """Consistent parameter bundle of the O(n) loop model.

    Use :meth:`from_lambda` for the usual construction; the raw constructor
    checks every constraint and raises :class:`DomainError` on violation.
    """

    lam: float
    u: float
    n: float
    sigma: float
    theta: float
    eps1: int = 1
    eps2: int = 1

    def __post_init__(self):
        vals = (self.lam, self.u, self.n, self.sigma, self.theta)
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"non-finite parameter in {vals}")
        if not 0.0 < self.u < 3.0 * self.lam:
            raise DomainError(f"need 0 < u < 3*lambda, got u={self.u}, lambda={self.lam}")
        if abs(self.n - fugacity_from_lambda(self.lam)) > _TOL:
            raise DomainError(f"n={self.n} inconsistent with lambda={self.lam}")
        if abs(self.sigma - spin(self.lam)) > _TOL:
            raise DomainError(f"sigma={self.sigma} inconsistent with lambda={self.lam}")
        if self.eps1 not in (1, -1) or self.eps2 not in (1, -1):
            raise DomainError("eps1 and eps2 must be +1 or -1")

    @classmethod
    def from_lambda(cls, lam: float, theta: float = math.pi / 2, u: float | None = None,
                    eps1: int = 1, eps2: int = 1) -> "LoopParams":
        """Build the bundle from ``lam`` and ``theta``.

        ``u`` defaults to the holomorphic value ``spectral_from_angle(sigma, theta)``;
        pass it explicitly to build deliberately mismatched parameters.
        """
        sigma = spin(lam)
        if u is None:
            u = spectral_from_angle(sigma, theta)
        return cls(lam=lam, u=u, n=fugacity_from_lambda(lam), sigma=sigma, theta=theta,
                   eps1=eps1, eps2=eps2)

    @property
    def nu(self) -> complex:
        return cmath.exp(1j * self.theta * (self.sigma + 1.0))

    @property
    def zeta(self) -> complex:
        return cmath.exp(1j * self.sigma * math.pi)

    @property
    def is_holomorphic_point(self) -> bool:
        return abs(self.u - spectral_from_angle(self.sigma, self.theta)) < _TOL
