"""Problem data model, primal objective, and feasibility predicates.

The primal problem minimizes

    P(x, v) = 1/2 x'Ax - c'x + 1/2 (1/2 x'Bx - alpha)^2 - f'v

over the fixed-charge box -v <= x <= v with binary v.  A is symmetric, B is
symmetric positive semidefinite, alpha > 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch
from .matkernel import SymmetricMatrix, eigen_summary

DEFAULT_FEAS_TOL = 1e-8
# Symmetrization corrections larger than this are reported to the caller.
SYMMETRY_REPORT_TOL = 1e-9


@dataclass(frozen=True)
class ProblemInstance:
    """The quintuple (A, B, alpha, c, f) defining P(x, v)."""

    n: int
    A: SymmetricMatrix
    B: SymmetricMatrix
    alpha: float
    c: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        for name in ("c", "f"):
            vec = np.asarray(getattr(self, name), dtype=float)
            if vec.shape != (self.n,):
                raise DimensionMismatch(f"{name} must have shape ({self.n},), got {vec.shape}")
            vec = vec.copy()
            vec.setflags(write=False)
            object.__setattr__(self, name, vec)
        if self.A.dim != self.n or self.B.dim != self.n:
            raise DimensionMismatch("A and B must be n x n")

    @property
    def is_diagonal(self) -> bool:
        return self.A.is_diagonal and self.B.is_diagonal

    @staticmethod
    def build(A, B, alpha, c, f) -> tuple["ProblemInstance", list[str]]:
        """Construct an instance from raw arrays, symmetrizing A and B.

        A and B may be 1-D (interpreted as diagonals, which activates the
        fast paths downstream) or 2-D.  Dense inputs are replaced by their
        symmetric part (M + M')/2; corrections beyond 1e-9 are reported in
        the returned list but do not fail the build.
        """
        corrections: list[str] = []

        def to_sym(arr, name):
            arr = np.asarray(arr, dtype=float)
            if arr.ndim == 1:
                return SymmetricMatrix.diagonal(arr)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
            skew = float(np.max(np.abs(arr - arr.T), initial=0.0))
            if skew > SYMMETRY_REPORT_TOL:
                corrections.append(
                    f"{name} symmetrized: max |{name} - {name}^T| was {skew:.3g}"
                )
            return SymmetricMatrix.dense(0.5 * (arr + arr.T))

        A_sym = to_sym(A, "A")
        B_sym = to_sym(B, "B")
        c = np.asarray(c, dtype=float)
        inst = ProblemInstance(n=c.shape[0], A=A_sym, B=B_sym, alpha=float(alpha), c=c,
                               f=np.asarray(f, dtype=float))
        return inst, corrections


@dataclass(frozen=True)
class PrimalPoint:
    """An (x, v) pair; candidate or certified solution."""

    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).copy()
        v = np.asarray(self.v, dtype=float).copy()
        if x.shape != v.shape or x.ndim != 1:
            raise DimensionMismatch("x and v must be 1-D vectors of equal length")
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "v", v)


def evaluate_primal(inst: ProblemInstance, p: PrimalPoint) -> float:
    """P(x, v) = 1/2 x'Ax - c'x + 1/2 (1/2 x'Bx - alpha)^2 - f'v."""
    x, v = p.x, p.v
    if x.shape != (inst.n,):
        raise DimensionMismatch(f"point has dimension {x.shape[0]}, instance has {inst.n}")
    if inst.A.is_diagonal:
        quad_a = float(inst.A.data @ (x * x))
    else:
        quad_a = float(x @ inst.A.entries @ x)
    if inst.B.is_diagonal:
        quad_b = float(inst.B.data @ (x * x))
    else:
        quad_b = float(x @ inst.B.entries @ x)
    return 0.5 * quad_a - float(inst.c @ x) + 0.5 * (0.5 * quad_b - inst.alpha) ** 2 - float(inst.f @ v)


def check_binary_feasible(p: PrimalPoint, tol: float = DEFAULT_FEAS_TOL) -> bool:
    """True iff every v_i is within tol of {0, 1} and |x_i| <= v_i + tol."""
    v_binary = np.minimum(np.abs(p.v), np.abs(p.v - 1.0)) <= tol
    box = np.abs(p.x) <= p.v + tol
    return bool(np.all(v_binary) and np.all(box))


def check_relaxed_feasible(p: PrimalPoint, tol: float = DEFAULT_FEAS_TOL) -> bool:
    """True iff x_i^2 <= v_i + tol and v_i (v_i - 1) <= tol for all i."""
    quad = p.x * p.x <= p.v + tol
    interval = p.v * (p.v - 1.0) <= tol
    return bool(np.all(quad) and np.all(interval))


def validate_instance(inst: ProblemInstance) -> list[str]:
    """Return one description per violated instance invariant (empty if valid)."""
    violations: list[str] = []
    a = inst.A.entries
    rel = 1e-12 * (1.0 + float(np.max(np.abs(a), initial=0.0)))
    if float(np.max(np.abs(a - a.T), initial=0.0)) > rel:
        violations.append("A is not symmetric")
    b = inst.B.entries
    rel = 1e-12 * (1.0 + float(np.max(np.abs(b), initial=0.0)))
    if float(np.max(np.abs(b - b.T), initial=0.0)) > rel:
        violations.append("B is not symmetric")
    summary = eigen_summary(inst.B)
    norm_b = float(np.linalg.norm(b, 2)) if inst.n else 0.0
    if summary.lambda_min < -1e-10 * (1.0 + norm_b):
        violations.append(
            f"B is not positive semidefinite (lambda_min = {summary.lambda_min:.6g})"
        )
    if not inst.alpha > 0.0:
        violations.append(f"alpha must be positive (got {inst.alpha:.6g})")
    return violations
