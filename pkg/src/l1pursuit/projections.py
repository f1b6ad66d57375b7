"""Orthogonal projections onto {x : Ax = b} and onto the l1-ball B1(0, r).

Both operators are exact up to the stated tolerances.  The l1 projection
uses the sort-based threshold search; an independent 200-step bisection on
the threshold is kept alongside it as a correctness oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import DEFAULT_SPD_TOL, SpdSolver, matvec, rmatvec, validate_matrix


@dataclass(frozen=True)
class L1Ball:
    """The ball {z : ||z||_1 <= radius}."""

    radius: float

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius >= 0.0):
            raise ValueError(f"l1-ball radius must be finite and >= 0, got {self.radius}")


class AffineProjector:
    """Projector onto M = {x : Ax = b} backed by an :class:`SpdSolver`.

    ``A`` must have full row rank; rank deficiency surfaces as a solver
    error, not a silent repair.  Immutable and shareable across threads.
    """

    def __init__(self, A, b: np.ndarray, solver: SpdSolver | None = None, tol: float = DEFAULT_SPD_TOL):
        validate_matrix(A)
        b = np.asarray(b, dtype=float)
        if b.ndim != 1 or b.shape[0] != A.shape[0]:
            raise ValueError(f"b has length {b.shape}, expected {A.shape[0]}")
        if not np.all(np.isfinite(b)):
            raise ValueError("b must be finite")
        self.A = A
        self.b = b
        self.solver = solver if solver is not None else SpdSolver(A, tol=tol)
        self.m, self.n = A.shape


def project_affine(proj: AffineProjector, z: np.ndarray) -> np.ndarray:
    """Euclidean projection of z onto {x : Ax = b}.

    Returns ``z - A^T w`` where ``A A^T w = A z - b``.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (proj.n,):
        raise ValueError(f"z has shape {z.shape}, expected ({proj.n},)")
    w = proj.solver.solve(matvec(proj.A, z) - proj.b)
    return z - rmatvec(proj.A, w)


def _l1_threshold(a: np.ndarray, r: float) -> float:
    """Soft-threshold level for projecting |z| = a (with sum(a) > r) onto radius r."""
    u = np.sort(a)[::-1]
    j = np.arange(1, u.shape[0] + 1)
    active = np.nonzero(u * j > np.cumsum(u) - r)[0]
    # Mathematically j = 1 always qualifies (r > 0); it can drop out in
    # floats when r is below the rounding resolution of u[0].
    rho = active[-1] if active.size else 0
    # fsum over the active prefix keeps the threshold exact to rounding.
    theta = (math.fsum(u[: rho + 1]) - r) / (rho + 1.0)
    return max(theta, 0.0)


def project_l1_ball(ball: L1Ball, z: np.ndarray) -> np.ndarray:
    """Euclidean projection of z onto B1(0, r).

    Interior points are returned unchanged; otherwise the result is
    ``sign(z) * max(|z| - theta, 0)`` with theta chosen so the output
    l1-norm equals r.  Entries with |z_i| exactly at the threshold map
    to zero.
    """
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("z must be finite")
    r = ball.radius
    if r == 0.0:
        return np.zeros_like(z)
    a = np.abs(z)
    if a.sum() <= r:
        return z.copy()
    theta = _l1_threshold(a, r)
    return np.sign(z) * np.maximum(a - theta, 0.0)


def l1_projection_oracle(ball: L1Ball, z: np.ndarray) -> np.ndarray:
    """Reference l1-ball projection via 200-step bisection on the threshold.

    Same contract as :func:`project_l1_ball`, implemented independently so
    the two can cross-check each other.
    """
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("z must be finite")
    r = ball.radius
    if r == 0.0:
        return np.zeros_like(z)
    a = np.abs(z)
    if a.sum() <= r:
        return z.copy()
    lo, hi = 0.0, float(a.max())
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if np.maximum(a - mid, 0.0).sum() > r:
            lo = mid
        else:
            hi = mid
    theta = 0.5 * (lo + hi)
    return np.sign(z) * np.maximum(a - theta, 0.0)
