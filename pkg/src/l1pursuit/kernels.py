"""Minimal dense/sparse linear-algebra kernels backing the projection operators.

The only nontrivial object here is :class:`SpdSolver`, which solves the
normal-equations system ``A A^T w = rhs`` either through a Cholesky factor of
the Gram matrix (dense ``A``, factored once and cached) or through conjugate
gradients applied in operator form (sparse ``A``, so ``A A^T`` is never
materialized).
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse

# ~sqrt(double machine epsilon); the default relative residual threshold.
DEFAULT_SPD_TOL = 1.49e-8

# Hard cap on conjugate-gradient iterations, as a multiple of m.
CG_ITER_FACTOR = 10


class SpdSolverError(RuntimeError):
    """A solve on A A^T failed: not positive definite, or CG ran out of budget."""


def is_sparse(A) -> bool:
    return scipy.sparse.issparse(A)


def validate_matrix(A) -> None:
    """Check structural invariants of a dense or CSC matrix.

    Dense matrices must be 2-D with finite entries.  Sparse matrices must be
    CSC with a nondecreasing pointer array, in-bounds row indices strictly
    increasing within each column, and finite nonzero values.  Raises
    ``ValueError`` on the first violation found.
    """
    if is_sparse(A):
        if A.format != "csc":
            raise ValueError(f"sparse matrices must be CSC, got {A.format!r}")
        m, n = A.shape
        ptr, idx, val = A.indptr, A.indices, A.data
        if len(ptr) != n + 1 or ptr[0] != 0 or ptr[-1] != len(idx):
            raise ValueError("CSC pointer array is inconsistent with nnz")
        if np.any(np.diff(ptr) < 0):
            raise ValueError("CSC pointer array is not nondecreasing")
        if len(idx):
            if idx.min() < 0 or idx.max() >= m:
                raise ValueError("CSC row index out of bounds")
            # Strict increase is only required between entries of one column.
            same_col = np.ones(len(idx) - 1, dtype=bool)
            ends = ptr[1:-1]
            ends = ends[(ends > 0) & (ends < len(idx))]
            same_col[ends - 1] = False
            if np.any((np.diff(idx) <= 0) & same_col):
                raise ValueError("CSC row indices must be strictly increasing within a column")
        if not np.all(np.isfinite(val)):
            raise ValueError("sparse values must be finite")
        if np.any(val == 0):
            raise ValueError("sparse values must be nonzero")
    else:
        A = np.asarray(A)
        if A.ndim != 2:
            raise ValueError(f"matrix must be 2-D, got shape {A.shape}")
        if not np.all(np.isfinite(A)):
            raise ValueError("matrix entries must be finite")


def matvec(A, x: np.ndarray) -> np.ndarray:
    """Matrix-vector product ``A x`` for dense or sparse ``A``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != A.shape[1]:
        raise ValueError(f"matvec dimension mismatch: A is {A.shape}, x has length {x.shape}")
    return np.asarray(A @ x)


def rmatvec(A, y: np.ndarray) -> np.ndarray:
    """Transposed product ``A^T y``."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != A.shape[0]:
        raise ValueError(f"rmatvec dimension mismatch: A is {A.shape}, y has length {y.shape}")
    return np.asarray(A.T @ y)


def gram_apply(A, w: np.ndarray) -> np.ndarray:
    """Apply the Gram operator, ``A (A^T w)``, without forming A A^T."""
    return matvec(A, rmatvec(A, w))


def gram_matrix(A) -> np.ndarray:
    """Dense Gram matrix ``A A^T`` (only sensible for modest row counts)."""
    G = A @ A.T
    if is_sparse(G):
        G = G.toarray()
    return np.asarray(G)


class SpdSolver:
    """Solver for ``A A^T w = rhs`` where ``A`` has full row rank.

    mode "cholesky" factors the Gram matrix once and reuses the factor;
    mode "cg" runs plain conjugate gradients on the Gram operator.  When
    ``mode`` is not given, dense matrices get Cholesky and sparse ones CG.

    Successful returns satisfy ``||A A^T w - rhs||_2 <= tol * (1 + ||rhs||_2)``;
    anything else raises :class:`SpdSolverError`.  Instances are immutable
    after construction and safe to share: each solve works on private
    buffers.
    """

    def __init__(self, A, mode: str | None = None, tol: float = DEFAULT_SPD_TOL):
        if not 0.0 < tol < 1.0:
            raise ValueError(f"tolerance must be in (0, 1), got {tol}")
        if mode is None:
            mode = "cg" if is_sparse(A) else "cholesky"
        if mode not in ("cholesky", "cg"):
            raise ValueError(f"unknown mode {mode!r}")
        validate_matrix(A)
        self.mode = mode
        self.tol = tol
        self.m = A.shape[0]
        self._A = A
        self._gram = None
        self._factor = None
        if mode == "cholesky":
            gram = gram_matrix(A)
            try:
                self._factor = scipy.linalg.cho_factor(gram, check_finite=False)
            except scipy.linalg.LinAlgError as exc:
                raise SpdSolverError(f"A A^T is not positive definite: {exc}") from exc
            self._gram = gram

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=float)
        if rhs.shape != (self.m,):
            raise ValueError(f"rhs length {rhs.shape} does not match m={self.m}")
        bound = self.tol * (1.0 + np.linalg.norm(rhs))
        if self.mode == "cholesky":
            w = scipy.linalg.cho_solve(self._factor, rhs, check_finite=False)
            residual = np.linalg.norm(self._gram @ w - rhs)
            if residual > bound:
                raise SpdSolverError(
                    f"Cholesky solve residual {residual:.3e} exceeds bound {bound:.3e}"
                )
            return w
        return self._solve_cg(rhs, bound)

    def _solve_cg(self, rhs: np.ndarray, bound: float) -> np.ndarray:
        A = self._A
        w = np.zeros(self.m)
        r = rhs.copy()
        p = r.copy()
        rs = float(r @ r)
        if np.sqrt(rs) <= bound:
            return w
        max_iters = CG_ITER_FACTOR * self.m
        iters = 0
        while iters < max_iters:
            iters += 1
            Ap = gram_apply(A, p)
            denom = float(p @ Ap)
            if denom <= 0.0 or not np.isfinite(denom):
                raise SpdSolverError("CG hit non-positive curvature: A A^T is not positive definite")
            alpha = rs / denom
            w += alpha * p
            r -= alpha * Ap
            rs_new = float(r @ r)
            if np.sqrt(rs_new) <= bound:
                # Guard against drift of the recursive residual.
                true_r = rhs - gram_apply(A, w)
                if np.linalg.norm(true_r) <= bound:
                    return w
                r = true_r
                p = r.copy()
                rs = float(r @ r)
                continue
            p = r + (rs_new / rs) * p
            rs = rs_new
        raise SpdSolverError(f"CG did not converge within {max_iters} iterations")
