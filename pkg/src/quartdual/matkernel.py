"""Dense symmetric linear-algebra primitives for the dual machinery.

Everything here operates on small matrices (n is a few dozen at most), so
dense O(n^3) algorithms are fine.  Diagonal-tagged matrices get O(n) fast
paths; a property test pins their agreement with the dense code.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch

# Relative cutoff below which eigen/singular values are treated as zero.
RANK_TOL = 1e-10
# Cholesky pivots must exceed this (relative) threshold for a PD verdict.
PIVOT_TOL = 1e-12
# Residual threshold for the column-space membership test in pseudo_solve.
COLSPACE_TOL = 1e-8


@dataclass(frozen=True)
class SymmetricMatrix:
    """A real symmetric matrix, stored dense or as its diagonal.

    ``entries`` is always the full dim x dim array; ``storage`` tags which
    representation backs it so the kernels can take the O(n) path.
    """

    dim: int
    storage: str  # "dense" | "diagonal"
    data: np.ndarray = field(repr=False)  # (dim, dim) dense or (dim,) diagonal

    def __post_init__(self):
        if self.storage not in ("dense", "diagonal"):
            raise ValueError(f"unknown storage tag {self.storage!r}")
        arr = np.asarray(self.data, dtype=float)
        if self.storage == "dense":
            if arr.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"expected {(self.dim, self.dim)}, got {arr.shape}")
            if not np.array_equal(arr, arr.T):
                raise ValueError("dense SymmetricMatrix entries must be exactly symmetric")
        else:
            if arr.shape != (self.dim,):
                raise DimensionMismatch(f"expected ({self.dim},), got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def dense(cls, arr) -> "SymmetricMatrix":
        arr = np.asarray(arr, dtype=float)
        return cls(dim=arr.shape[0], storage="dense", data=arr)

    @classmethod
    def diagonal(cls, diag) -> "SymmetricMatrix":
        diag = np.asarray(diag, dtype=float)
        return cls(dim=diag.shape[0], storage="diagonal", data=diag)

    @property
    def is_diagonal(self) -> bool:
        return self.storage == "diagonal"

    @property
    def entries(self) -> np.ndarray:
        """Full dim x dim array (materialized for diagonal storage)."""
        if self.is_diagonal:
            return np.diag(self.data)
        return np.asarray(self.data)

    @property
    def diag(self) -> np.ndarray:
        if self.is_diagonal:
            return np.asarray(self.data)
        return np.diagonal(self.entries).copy()


@dataclass(frozen=True)
class EigenSummary:
    """Extremal eigenvalues and numerical rank of a symmetric matrix."""

    lambda_min: float
    lambda_max: float
    rank: int


def _eigvals(M: SymmetricMatrix) -> np.ndarray:
    if M.is_diagonal:
        return np.sort(M.data)
    return np.linalg.eigvalsh(M.entries)


def cholesky_pd_check(M: SymmetricMatrix) -> bool:
    """True iff a Cholesky factorization of M succeeds.

    Success means every pivot exceeds PIVOT_TOL * (1 + max diagonal entry);
    this is the package-wide definition of "positive definite".
    """
    if M.dim == 0:
        return True
    thresh = PIVOT_TOL * (1.0 + float(np.max(M.diag, initial=0.0)))
    if M.is_diagonal:
        return bool(np.all(M.data > thresh))
    a = M.entries.copy()
    n = M.dim
    for k in range(n):
        pivot = a[k, k]
        if not pivot > thresh:
            return False
        a[k, k] = np.sqrt(pivot)
        if k + 1 < n:
            a[k + 1:, k] /= a[k, k]
            a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k + 1:, k])
    return True


def eigen_summary(M: SymmetricMatrix) -> EigenSummary:
    """Smallest/largest eigenvalue and the count of eigenvalues above the rank cutoff."""
    w = _eigvals(M)
    lam_min = float(w[0])
    lam_max = float(w[-1])
    tol = RANK_TOL * (1.0 + abs(lam_max))
    rank = int(np.sum(np.abs(w) > tol))
    return EigenSummary(lambda_min=lam_min, lambda_max=lam_max, rank=rank)


def pseudo_solve(M: SymmetricMatrix, b) -> tuple[np.ndarray, bool]:
    """Solve M y = b in the Moore-Penrose sense via symmetric eigendecomposition.

    Returns (y, in_column_space) where y = M^+ b and the flag reports whether
    the residual ||M y - b|| stays below COLSPACE_TOL * (1 + ||b||).  For
    nonsingular M, y is the unique solution.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (M.dim,):
        raise DimensionMismatch(f"expected ({M.dim},), got {b.shape}")
    if M.is_diagonal:
        d = M.data
        cutoff = RANK_TOL * float(np.max(np.abs(d), initial=0.0))
        inv = np.where(np.abs(d) > cutoff, 1.0 / np.where(d == 0.0, 1.0, d), 0.0)
        y = inv * b
        resid = np.linalg.norm(d * y - b)
    else:
        w, V = np.linalg.eigh(M.entries)
        cutoff = RANK_TOL * float(np.max(np.abs(w), initial=0.0))
        inv = np.where(np.abs(w) > cutoff, 1.0 / np.where(w == 0.0, 1.0, w), 0.0)
        y = V @ (inv * (V.T @ b))
        resid = np.linalg.norm(M.entries @ y - b)
    in_col = bool(resid <= COLSPACE_TOL * (1.0 + np.linalg.norm(b)))
    return y, in_col


def solve_pd(M: SymmetricMatrix, b: np.ndarray) -> np.ndarray:
    """Exact solve for a matrix already known to be positive definite."""
    if M.is_diagonal:
        return np.asarray(b, dtype=float) / M.data
    return np.linalg.solve(M.entries, np.asarray(b, dtype=float))


def inverse_pd(M: SymmetricMatrix) -> np.ndarray:
    """Dense inverse of a positive definite matrix (diagonal path returns diag matrix)."""
    if M.is_diagonal:
        return np.diag(1.0 / M.data)
    inv = np.linalg.inv(M.entries)
    return 0.5 * (inv + inv.T)


def logdet_pd(M: SymmetricMatrix) -> float:
    """log det of a positive definite matrix."""
    if M.is_diagonal:
        return float(np.sum(np.log(M.data)))
    sign, val = np.linalg.slogdet(M.entries)
    if sign <= 0:
        return -np.inf
    return float(val)
