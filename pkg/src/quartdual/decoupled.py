"""Analytic treatment of diagonal instances.

With A = Diag(a) and B = Diag(b) the dual function separates coordinatewise
apart from the scalar sigma0, whose stationary value is sigma0* = 1/2 sum(b)
- alpha.  Each coordinate then admits exactly two candidate multipliers,

    M_i = { -1/2 (a_i + sigma0* b_i + c_i),  -1/2 (a_i + sigma0* b_i - c_i) }
    N_i = f_i + M_i   (matching branches),

giving 2^n dual critical points.  When max M_i > 0 and max N_i > 0 for all
i, the max-branch point lies in the positive cone and yields the closed-form
global minimizer x = c/|c| (componentwise), v = all-ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dualcore import DualPoint, in_S_plus
from .errors import NotDiagonal, TooLarge, ZeroC
from .instance import PrimalPoint, ProblemInstance

ENUM_MAX_N = 20


@dataclass(frozen=True)
class DecoupledCandidates:
    """sigma0* and the per-coordinate candidate pairs (plus-branch first)."""

    sigma0_star: float
    M: np.ndarray  # (n, 2)
    N: np.ndarray  # (n, 2)


def _require_decoupled(inst: ProblemInstance) -> tuple[np.ndarray, np.ndarray]:
    if not inst.is_diagonal:
        raise NotDiagonal("A and B must both be diagonal")
    if np.any(np.abs(inst.c) <= 0.0):
        raise ZeroC("every c_i must be nonzero")
    return np.asarray(inst.A.data), np.asarray(inst.B.data)


def decoupled_candidates(inst: ProblemInstance) -> DecoupledCandidates:
    """Candidate multiplier pairs at the decoupled critical points."""
    a, b = _require_decoupled(inst)
    sigma0 = 0.5 * float(np.sum(b)) - inst.alpha
    base = a + sigma0 * b
    M = np.column_stack([-0.5 * (base + inst.c), -0.5 * (base - inst.c)])
    N = inst.f[:, None] + M
    return DecoupledCandidates(sigma0_star=sigma0, M=M, N=N)


def theorem5_solve(inst: ProblemInstance) -> Optional[tuple[DualPoint, PrimalPoint, float]]:
    """Closed-form global solution when max M_i > 0 and max N_i > 0 for all i.

    Returns (dual point, primal point, common objective value), or None when
    the sign conditions fail.
    """
    cand = decoupled_candidates(inst)
    s1 = cand.M.max(axis=1)
    s2 = cand.N.max(axis=1)
    if not (np.all(s1 > 0.0) and np.all(s2 > 0.0)):
        return None
    dual = DualPoint(sigma0=cand.sigma0_star, sigma1=s1, sigma2=s2)
    x = inst.c / np.abs(inst.c)
    primal = PrimalPoint(x=x, v=np.ones(inst.n))
    # G is Diag(|c|) at the max branch, so c'G^{-1}c collapses to sum |c_i|.
    value = float(
        -0.5 * np.sum(np.abs(inst.c))
        - np.sum(s2)
        - 0.5 * cand.sigma0_star**2
        - inst.alpha * cand.sigma0_star
    )
    return dual, primal, value


def enumerate_critical_points(
    inst: ProblemInstance,
) -> list[tuple[DualPoint, Optional[float], bool]]:
    """All 2^n branch-consistent dual critical points, best value first.

    Each entry carries the dual value (None when some sigma2 <= 0 puts the
    point outside the dual function's domain) and a positive-cone membership
    flag.  Ties break on the lexicographically smallest branch pattern
    (plus-branch = 0 first).
    """
    a, b = _require_decoupled(inst)
    n = inst.n
    if n > ENUM_MAX_N:
        raise TooLarge(f"enumeration supports n <= {ENUM_MAX_N}, got {n}")
    cand = decoupled_candidates(inst)
    sigma0 = cand.sigma0_star

    # Branch matrix: row k bit i selects the minus branch of coordinate i.
    combos = 1 << n
    bits = (np.arange(combos)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    s1 = np.where(bits == 0, cand.M[:, 0], cand.M[:, 1])
    s2 = np.where(bits == 0, cand.N[:, 0], cand.N[:, 1])
    g = a + sigma0 * b + 2.0 * s1  # equals -c on plus branches, +c on minus

    quad = -0.5 * np.sum(inst.c * inst.c / g, axis=1)
    const = -0.5 * sigma0**2 - inst.alpha * sigma0
    # f + s1 = s2 on matched branches, so the sigma2 sum collapses to sum(s2).
    values = quad - np.sum(s2, axis=1) + const
    has_value = np.all(s2 > 0.0, axis=1)

    results: list[tuple[DualPoint, Optional[float], bool]] = []
    for k in range(combos):
        d = DualPoint(sigma0=sigma0, sigma1=s1[k], sigma2=s2[k])
        val = float(values[k]) if has_value[k] else None
        results.append((d, val, in_S_plus(inst, d)))

    order = sorted(
        range(combos),
        key=lambda k: (
            0 if has_value[k] else 1,
            -values[k] if has_value[k] else 0.0,
            tuple(bits[k]),
        ),
    )
    return [results[k] for k in order]
