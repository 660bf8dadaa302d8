"""Critical Boltzmann weights of the square-lattice O(n) model and the linear
relations that discrete holomorphicity imposes on them.

The nine weights ``rho[0..8]`` (``rho_1 .. rho_9``) are stored in a length-9
array with the degeneracies ``rho_2 = rho_3``, ``rho_4 = rho_5`` and
``rho_6 = rho_7`` built in.  The linear system only ever sees the six
independent components ``(rho_1, rho_2, rho_4, rho_6, rho_8, rho_9)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSolutionError, DomainError, NoSolutionError
from .params import LoopParams, fugacity_from_lambda, lambda_from_spin, spin

# columns of the 9-vector summed into each reduced unknown
REDUCED_GROUPS = ((0,), (1, 2), (3, 4), (5, 6), (7,), (8,))

# rho_2 <-> rho_4, rho_3 <-> rho_5, rho_8 <-> rho_9
CROSSING = np.array([0, 3, 4, 1, 2, 5, 6, 8, 7])


@dataclass(frozen=True)
class LoopWeights:
    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=float)
        if rho.shape != (9,):
            raise DomainError(f"expected 9 weights, got shape {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise DomainError("weights must be finite")
        if rho[1] != rho[2] or rho[3] != rho[4] or rho[5] != rho[6]:
            raise DomainError("weights must satisfy rho2=rho3, rho4=rho5, rho6=rho7")
        if not np.any(rho):
            raise DomainError("all weights are zero")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_reduced(cls, r) -> "LoopWeights":
        r1, r2, r4, r6, r8, r9 = r
        return cls(np.array([r1, r2, r2, r4, r4, r6, r6, r8, r9], dtype=float))

    @property
    def reduced(self) -> np.ndarray:
        return self.rho[[0, 1, 3, 5, 7, 8]]

    def __getitem__(self, i):
        return self.rho[i]


def _as_rho(w) -> np.ndarray:
    return np.asarray(getattr(w, "rho", w), dtype=float)


def boltzmann_weights(lam: float, u: float, eps1: int = 1, eps2: int = 1) -> LoopWeights:
    """Closed-form critical weights at crossing angle ``lam`` and spectral angle ``u``.

    No range check on ``u``; the expressions are entire in both arguments.
    """
    s = math.sin
    a, b = s(3 * lam - u), s(u)
    rho = np.array([
        a * b + s(2 * lam) * s(3 * lam),
        eps1 * a * s(2 * lam),
        eps1 * a * s(2 * lam),
        eps2 * b * s(2 * lam),
        eps2 * b * s(2 * lam),
        a * b,
        a * b,
        a * s(2 * lam - u),
        -s(lam - u) * b,
    ])
    return LoopWeights(rho)


def compute_weights(params: LoopParams) -> LoopWeights:
    return boltzmann_weights(params.lam, params.u, params.eps1, params.eps2)


def holo_matrix(n: float, theta: float, sigma: float, crossed: bool = True) -> np.ndarray:
    """4x9 complex coefficient matrix of the holomorphicity relations.

    Row k is the relation obtained from the k-th external connectivity seen
    from the entry mid-edge.  With ``crossed=False`` the columns follow the
    relations' own labelling of the local states; in that labelling the two
    elbow classes (and the two double-elbow states) are interchanged relative
    to :func:`boltzmann_weights`, so the closed-form weights only satisfy the
    relations at the isotropic point.  ``crossed=True`` (the default) applies
    the interchange so both use the same labelling.
    """
    nu = np.exp(1j * theta * (sigma + 1.0))
    z = np.exp(1j * sigma * np.pi)
    A = np.zeros((4, 9), dtype=complex)
    A[0, [0, 1, 3, 6]] = [1.0, nu, -nu / z, -1.0]
    A[1, [1, 4, 6, 7, 8]] = [-1.0 / z, n, nu * z, -nu / z, -nu / z * n]
    A[2, [2, 3, 6, 7, 8]] = [n, -z, -nu / z**2, nu * n, nu]
    A[3, [1, 3, 5, 7, 8]] = [-nu / z**2, nu * z, n, -1.0 / z**2, -z**2]
    if crossed:
        A = A[:, np.argsort(CROSSING)]
    return A


def holo_residuals(w, n: float, theta: float, sigma: float, crossed: bool = True) -> np.ndarray:
    """Left-hand sides of the four holomorphicity relations, as a complex 4-vector."""
    return holo_matrix(n, theta, sigma, crossed) @ _as_rho(w)


def reduced_system(n: float, theta: float, sigma: float, crossed: bool = True) -> np.ndarray:
    """8x6 real matrix: real and imaginary parts stacked, degeneracies folded in."""
    A = holo_matrix(n, theta, sigma, crossed)
    red = np.stack([A[:, list(g)].sum(axis=1) for g in REDUCED_GROUPS], axis=1)
    return np.vstack([red.real, red.imag])


def _fix_sign(v: np.ndarray) -> np.ndarray:
    pivot = v[0] if abs(v[0]) > 1e-14 else v[np.argmax(np.abs(v))]
    return -v if pivot < 0 else v


def _nullspace(n, theta, sigma, rtol, crossed):
    R = reduced_system(n, theta, sigma, crossed)
    _, sv, vt = np.linalg.svd(R)
    rel = sv / sv[0]
    return rel, vt


def nullity(n: float, theta: float, sigma: float, rtol: float = 1e-8, crossed: bool = True) -> int:
    """Dimension of the real solution space, by relative singular-value threshold."""
    rel, _ = _nullspace(n, theta, sigma, rtol, crossed)
    return int(np.sum(rel < rtol))


def solve_holo_system(n: float, theta: float, sigma: float, rtol: float = 1e-8,
                      continuation: bool = True, crossed: bool = True) -> LoopWeights:
    """Recover the weights, up to scale, as the real nullvector of the relations.

    Returns a unit-norm 9-vector with ``rho_1 >= 0``.  At isolated points of
    the critical manifold (``n = +-1`` among them) the nullspace is larger than
    one-dimensional; there, with ``continuation`` set, the solution is the
    limit of the unique nullvectors at neighbouring critical points.
    """
    rel, vt = _nullspace(n, theta, sigma, rtol, crossed)
    if rel[-1] > rtol:
        raise NoSolutionError(
            f"smallest relative singular value {rel[-1]:.3e} > {rtol:g}; no solution")
    if rel[-2] < rtol:
        on_manifold = abs(n - fugacity_from_lambda(lambda_from_spin(sigma))) < 1e-10
        if not (continuation and on_manifold):
            raise DegenerateSolutionError(
                f"solution space has dimension {int(np.sum(rel < rtol))}")
        v = _continue_along_manifold(theta, sigma, vt[rel < rtol], rtol, crossed)
    else:
        v = vt[-1]
    w = LoopWeights.from_reduced(_fix_sign(v))
    return LoopWeights(w.rho / np.linalg.norm(w.rho))


def _continue_along_manifold(theta, sigma, basis, rtol, crossed, delta=1e-4):
    lam = lambda_from_spin(sigma)
    vs = []
    for lam_k in (lam - delta, lam + delta):
        rel, vt = _nullspace(fugacity_from_lambda(lam_k), theta, spin(lam_k), rtol, crossed)
        if rel[-2] < rtol:
            raise DegenerateSolutionError("neighbouring critical points are degenerate too")
        vs.append(vt[-1])
    if vs[0] @ vs[1] < 0:
        vs[1] = -vs[1]
    v = 0.5 * (vs[0] + vs[1])
    # project onto the exact nullspace at the requested point
    v = basis.T @ (basis @ v)
    return v / np.linalg.norm(v)
