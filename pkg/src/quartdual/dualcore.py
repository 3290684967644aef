"""Canonical dual function, its derivatives, and primal recovery.

The dual matrix is G(sigma0, sigma1) = A + sigma0 * B + 2 Diag(sigma1).  The
full dual function over (sigma0, sigma1, sigma2) is

    Pd = -1/2 c'G^+ c - 1/4 sum_i (f_i + s1_i + s2_i)^2 / s2_i
         - 1/2 sigma0^2 - alpha sigma0,

concave wherever G is positive definite and sigma2 > 0.  Maximizing out
sigma2 analytically (the optimum is sigma2 = |f + sigma1|) leaves the
reduced dual

    Pg = -1/2 c'G^{-1}c - sum_i (f_i + s1_i)^+ - 1/2 sigma0^2 - alpha sigma0

on the cone where G > 0, sigma1 >= 0, sigma0 >= -alpha and no f_i + s1_i
vanishes.  A critical point of Pg recovers a certified global primal
minimizer (x, v) = (G^{-1} c, indicator(f + sigma1 > 0)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    NonPositiveSigma2,
    NotInColumnSpace,
    SingularG,
    TieAtZero,
)
from .instance import PrimalPoint, ProblemInstance
from .matkernel import (
    RANK_TOL,
    SymmetricMatrix,
    cholesky_pd_check,
    inverse_pd,
    pseudo_solve,
)

# |f_i + sigma1_i| at or below this is an undefined kink.
TIE_TOL = 1e-12


@dataclass(frozen=True)
class DualPoint:
    """Full dual variables (sigma0, sigma1, sigma2) in R^(2n+1)."""

    sigma0: float
    sigma1: np.ndarray
    sigma2: np.ndarray

    def __post_init__(self):
        s1 = np.asarray(self.sigma1, dtype=float).copy()
        s2 = np.asarray(self.sigma2, dtype=float).copy()
        if s1.shape != s2.shape or s1.ndim != 1:
            raise DimensionMismatch("sigma1 and sigma2 must be 1-D of equal length")
        s1.setflags(write=False)
        s2.setflags(write=False)
        object.__setattr__(self, "sigma1", s1)
        object.__setattr__(self, "sigma2", s2)

    @property
    def reduced(self) -> "ReducedDualPoint":
        return ReducedDualPoint(sigma0=self.sigma0, sigma1=self.sigma1)


@dataclass(frozen=True)
class ReducedDualPoint:
    """Reduced dual variables (sigma0, sigma1) in R^(n+1)."""

    sigma0: float
    sigma1: np.ndarray

    def __post_init__(self):
        s1 = np.asarray(self.sigma1, dtype=float).copy()
        if s1.ndim != 1:
            raise DimensionMismatch("sigma1 must be 1-D")
        s1.setflags(write=False)
        object.__setattr__(self, "sigma1", s1)

    def lifted(self, sigma2) -> DualPoint:
        return DualPoint(sigma0=self.sigma0, sigma1=self.sigma1, sigma2=sigma2)


@dataclass(frozen=True)
class DualDerivatives:
    """Value, gradient, and Hessian of the full dual function.

    Gradient and Hessian are ordered (sigma0, sigma1_1..sigma1_n,
    sigma2_1..sigma2_n).
    """

    value: float
    gradient: np.ndarray
    hessian: np.ndarray


def build_G(inst: ProblemInstance, q: ReducedDualPoint) -> SymmetricMatrix:
    """G = A + sigma0 * B + 2 Diag(sigma1); diagonal-tagged when A, B are."""
    if q.sigma1.shape != (inst.n,):
        raise DimensionMismatch("sigma1 dimension does not match instance")
    if inst.is_diagonal:
        return SymmetricMatrix.diagonal(inst.A.data + q.sigma0 * inst.B.data + 2.0 * q.sigma1)
    g = inst.A.entries + q.sigma0 * inst.B.entries + 2.0 * np.diag(q.sigma1)
    return SymmetricMatrix.dense(g)


def _require_nonsingular_inverse(G: SymmetricMatrix) -> np.ndarray:
    """Inverse of G, raising SingularG when G is numerically singular."""
    if G.is_diagonal:
        cutoff = RANK_TOL * (1.0 + float(np.max(np.abs(G.data), initial=0.0)))
        if np.any(np.abs(G.data) <= cutoff):
            raise SingularG("G has a (near-)zero diagonal entry")
        return np.diag(1.0 / G.data)
    w, V = np.linalg.eigh(G.entries)
    cutoff = RANK_TOL * (1.0 + float(np.max(np.abs(w), initial=0.0)))
    if np.any(np.abs(w) <= cutoff):
        raise SingularG(f"G is numerically singular (|lambda|_min = {np.min(np.abs(w)):.3g})")
    return (V / w) @ V.T


def dual_value(inst: ProblemInstance, d: DualPoint) -> float:
    """Full dual function at (sigma0, sigma1, sigma2); uses the pseudo-inverse of G."""
    if d.sigma1.shape != (inst.n,):
        raise DimensionMismatch("dual point dimension does not match instance")
    if np.any(d.sigma2 <= 0.0):
        raise NonPositiveSigma2("sigma2 must be strictly positive componentwise")
    G = build_G(inst, d.reduced)
    y, in_col = pseudo_solve(G, inst.c)
    if not in_col:
        raise NotInColumnSpace("c is not in the column space of G")
    u = inst.f + d.sigma1 + d.sigma2
    return float(
        -0.5 * inst.c @ y
        - 0.25 * np.sum(u * u / d.sigma2)
        - 0.5 * d.sigma0**2
        - inst.alpha * d.sigma0
    )


def dual_derivatives(inst: ProblemInstance, d: DualPoint) -> DualDerivatives:
    """Value, gradient, and Hessian of the full dual function at d.

    Requires G nonsingular and sigma2 > 0.  The Hessian is assembled as
    -J1 - J2 - J3: J1 is the unit sigma0-sigma0 block, J2 = Z'G^{-1}Z over
    the (sigma0, sigma1) block with Z columns (dG/d.) G^{-1} c, and J3
    carries the diagonal sigma1/sigma2 coupling blocks.
    """
    n = inst.n
    if d.sigma1.shape != (n,):
        raise DimensionMismatch("dual point dimension does not match instance")
    if np.any(d.sigma2 <= 0.0):
        raise NonPositiveSigma2("sigma2 must be strictly positive componentwise")
    G = build_G(inst, d.reduced)
    Ginv = _require_nonsingular_inverse(G)
    x = Ginv @ inst.c
    Bmat = inst.B.entries
    Bx = Bmat @ x
    s1, s2 = d.sigma1, d.sigma2
    u = inst.f + s1 + s2
    ratio = u / s2

    value = float(
        -0.5 * inst.c @ x - 0.25 * np.sum(u * ratio) - 0.5 * d.sigma0**2 - inst.alpha * d.sigma0
    )

    grad = np.empty(2 * n + 1)
    grad[0] = 0.5 * x @ Bx - d.sigma0 - inst.alpha
    grad[1:n + 1] = x * x - 0.5 * ratio
    grad[n + 1:] = -0.5 * ratio + 0.25 * ratio * ratio

    # J2 over (sigma0, sigma1): Z = [B G^{-1} c, 2 x_1 e_1, ..., 2 x_n e_n].
    w = Ginv @ Bx
    j2 = np.zeros((2 * n + 1, 2 * n + 1))
    j2[0, 0] = Bx @ w
    j2[0, 1:n + 1] = 2.0 * x * w
    j2[1:n + 1, 0] = j2[0, 1:n + 1]
    j2[1:n + 1, 1:n + 1] = 4.0 * np.outer(x, x) * Ginv

    j1 = np.zeros_like(j2)
    j1[0, 0] = 1.0

    # J3 = sum_i (1 / (2 s2_i)) w_i w_i' with w_i = e_{s1_i} - ((f+s1)_i / s2_i) e_{s2_i}.
    t = inst.f + s1
    j3 = np.zeros_like(j2)
    idx1 = np.arange(1, n + 1)
    idx2 = np.arange(n + 1, 2 * n + 1)
    j3[idx1, idx1] = 0.5 / s2
    j3[idx1, idx2] = -0.5 * t / (s2 * s2)
    j3[idx2, idx1] = j3[idx1, idx2]
    j3[idx2, idx2] = 0.5 * t * t / (s2**3)

    hess = -j1 - j2 - j3
    hess = 0.5 * (hess + hess.T)
    return DualDerivatives(value=value, gradient=grad, hessian=hess)


def _kink_values(inst: ProblemInstance, q: ReducedDualPoint) -> np.ndarray:
    t = inst.f + q.sigma1
    if np.any(np.abs(t) <= TIE_TOL):
        bad = int(np.argmin(np.abs(t)))
        raise TieAtZero(f"f + sigma1 vanishes at index {bad}")
    return t


def reduced_dual_value(inst: ProblemInstance, q: ReducedDualPoint) -> float:
    """Reduced dual Pg at (sigma0, sigma1); equals sup over sigma2 of the full dual."""
    t = _kink_values(inst, q)
    G = build_G(inst, q)
    Ginv = _require_nonsingular_inverse(G)
    x = Ginv @ inst.c
    return float(
        -0.5 * inst.c @ x
        - np.sum(np.maximum(t, 0.0))
        - 0.5 * q.sigma0**2
        - inst.alpha * q.sigma0
    )


def reduced_dual_derivatives(inst: ProblemInstance, q: ReducedDualPoint) -> tuple[float, np.ndarray]:
    """Value and gradient of the reduced dual, ordered (sigma0, sigma1)."""
    t = _kink_values(inst, q)
    G = build_G(inst, q)
    Ginv = _require_nonsingular_inverse(G)
    x = Ginv @ inst.c
    value = float(
        -0.5 * inst.c @ x
        - np.sum(np.maximum(t, 0.0))
        - 0.5 * q.sigma0**2
        - inst.alpha * q.sigma0
    )
    grad = np.empty(inst.n + 1)
    grad[0] = 0.5 * x @ (inst.B.entries @ x) - q.sigma0 - inst.alpha
    grad[1:] = x * x - (t > 0.0).astype(float)
    return value, grad


def reduced_dual_hessian(inst: ProblemInstance, q: ReducedDualPoint) -> np.ndarray:
    """Hessian of the reduced dual over (sigma0, sigma1), away from kinks.

    Equals -(E00 + Y'G^{-1}Y) with Y columns B G^{-1} c and 2 x_i e_i; the
    piecewise-linear positive-part term contributes nothing off its kinks.
    """
    _kink_values(inst, q)
    G = build_G(inst, q)
    Ginv = _require_nonsingular_inverse(G)
    x = Ginv @ inst.c
    Bx = inst.B.entries @ x
    w = Ginv @ Bx
    n = inst.n
    h = np.zeros((n + 1, n + 1))
    h[0, 0] = 1.0 + Bx @ w
    h[0, 1:] = 2.0 * x * w
    h[1:, 0] = h[0, 1:]
    h[1:, 1:] = 4.0 * np.outer(x, x) * Ginv
    return -h


def sigma2_star(inst: ProblemInstance, q: ReducedDualPoint) -> np.ndarray:
    """The sigma2 maximizing the full dual at fixed (sigma0, sigma1): |f + sigma1|."""
    t = _kink_values(inst, q)
    return np.abs(t)


def positive_part_selector(t) -> np.ndarray:
    """Componentwise indicator of positivity; undefined (TieAtZero) at zeros."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) <= TIE_TOL):
        bad = int(np.argmin(np.abs(t)))
        raise TieAtZero(f"selector undefined: component {bad} is zero")
    return (t > 0.0).astype(float)


def recover_primal(inst: ProblemInstance, q: ReducedDualPoint) -> PrimalPoint:
    """Primal recovery (x, v) = (G^{-1} c, indicator(f + sigma1 > 0)).

    Requires G positive definite and no f_i + sigma1_i on the kink.
    """
    t = _kink_values(inst, q)
    G = build_G(inst, q)
    if not cholesky_pd_check(G):
        raise SingularG("G is not positive definite at the recovery point")
    Ginv = _require_nonsingular_inverse(G)
    x = Ginv @ inst.c
    v = (t > 0.0).astype(float)
    return PrimalPoint(x=x, v=v)


def in_S_plus(inst: ProblemInstance, d: DualPoint) -> bool:
    """Membership in the positive dual cone: sigma0 >= -alpha, sigma1 >= 0,
    sigma2 > 0, and G positive definite."""
    if d.sigma0 < -inst.alpha:
        return False
    if np.any(d.sigma1 < 0.0) or np.any(d.sigma2 <= 0.0):
        return False
    return cholesky_pd_check(build_G(inst, d.reduced))


def in_S_reduced(inst: ProblemInstance, q: ReducedDualPoint) -> bool:
    """Membership in the reduced cone: sigma0 >= -alpha, sigma1 >= 0, G
    positive definite, and every f_i + sigma1_i off the kink."""
    if q.sigma0 < -inst.alpha:
        return False
    if np.any(q.sigma1 < 0.0):
        return False
    if np.any(np.abs(inst.f + q.sigma1) <= TIE_TOL):
        return False
    return cholesky_pd_check(build_G(inst, q))
