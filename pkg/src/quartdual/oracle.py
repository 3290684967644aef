"""Brute-force ground truth for small instances.

Enumerates all 2^n binary v and minimizes the continuous quartic over each
box [-v, v] by multi-start projected gradient descent.  Favors
trustworthiness over speed: no curvature tricks, just many seeded starts and
backtracking.  The result is a strong heuristic ground truth, not a
certificate.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DimensionMismatch, TooLarge
from .instance import PrimalPoint, ProblemInstance

_MAX_BATCH_ROWS = 5_000_000
_TIE_EPS = 1e-9


@dataclass(frozen=True)
class OracleConfig:
    n_starts: int = 32
    grid_per_dim: int = 0  # 0 = off; >= 2 adds a per-dimension grid of seeds
    descent_tol: float = 1e-10
    max_n: int = 12
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be >= 1")
        if self.max_n > 20:
            raise ValueError("max_n is capped at 20")


def primal_gradient_x(inst: ProblemInstance, x) -> np.ndarray:
    """Gradient of the continuous part: A x - c + (1/2 x'Bx - alpha) B x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise DimensionMismatch(f"x must have shape ({inst.n},)")
    A = inst.A.entries
    B = inst.B.entries
    Bx = B @ x
    return A @ x - inst.c + (0.5 * x @ Bx - inst.alpha) * Bx


def _batch_objective(inst, X):
    A = inst.A.entries
    B = inst.B.entries
    XB = X @ B
    quad_b = np.einsum("ij,ij->i", XB, X)
    quad_a = np.einsum("ij,ij->i", X @ A, X)
    return 0.5 * quad_a - X @ inst.c + 0.5 * (0.5 * quad_b - inst.alpha) ** 2


def _batch_gradient(inst, X):
    A = inst.A.entries
    B = inst.B.entries
    XB = X @ B
    xi = 0.5 * np.einsum("ij,ij->i", XB, X) - inst.alpha
    return X @ A - inst.c + xi[:, None] * XB


def _pgd_batch(inst, V, X, tol, max_iter=2000):
    """Projected gradient descent with per-row backtracking on a batch.

    V and X are (m, n); each row descends the continuous objective inside
    its own box [-V_k, V_k].  Returns the final iterates and values.
    """
    X = np.clip(X, -V, V)
    fX = _batch_objective(inst, X)
    step = np.full(X.shape[0], 1.0)
    active = np.arange(X.shape[0])
    out_X = X.copy()
    out_f = fX.copy()

    for _ in range(max_iter):
        if active.size == 0:
            break
        Xa = out_X[active]
        Va = V[active]
        fa = out_f[active]
        ga = _batch_gradient(inst, Xa)
        ta = step[active]
        accepted = np.zeros(active.size, dtype=bool)
        Xn = Xa.copy()
        fn = fa.copy()
        for _bt in range(40):
            todo = ~accepted
            if not todo.any():
                break
            trial = np.clip(Xa[todo] - ta[todo, None] * ga[todo], -Va[todo], Va[todo])
            f_trial = _batch_objective(inst, trial)
            diff = Xa[todo] - trial
            decrease = np.einsum("ij,ij->i", ga[todo], diff)
            ok = f_trial <= fa[todo] - 1e-4 * decrease + 1e-15 * (1.0 + np.abs(fa[todo]))
            idx = np.flatnonzero(todo)[ok]
            Xn[idx] = trial[ok]
            fn[idx] = f_trial[ok]
            accepted[idx] = True
            ta[np.flatnonzero(todo)[~ok]] *= 0.5
        ta[accepted] *= 1.3
        step[active] = np.minimum(ta, 1e6)

        move = np.max(np.abs(Xn - Xa), axis=1)
        out_X[active] = Xn
        out_f[active] = fn
        scale = 1.0 + np.max(np.abs(Xn), axis=1)
        done = (move <= tol * scale) | ~accepted
        active = active[~done]
    return out_X, out_f


def _seed_block(inst, v, cfg, base_draw):
    """Deterministic start points for one box [-v, v]."""
    n = inst.n
    seeds = [np.zeros(n), v.astype(float), -v.astype(float)]
    A = inst.A.entries
    try:
        x_news = np.linalg.solve(A, inst.c)
        if np.all(np.isfinite(x_news)):
            seeds.append(np.clip(x_news, -v, v))
    except np.linalg.LinAlgError:
        pass
    seeds.append(base_draw * v)  # (n_starts, n) scaled into the box
    if cfg.grid_per_dim >= 2:
        axes = [np.linspace(-1.0, 1.0, cfg.grid_per_dim)] * n
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        seeds.append(grid * v)
    return np.vstack([np.atleast_2d(s) for s in seeds])


def _pgd_two_phase(inst, V, X0, sizes, tol):
    """Loose pass over every start, then a tight pass on each block's best row.

    The bulk phase gets every start near its local minimum cheaply; only the
    winner of each box is polished to the requested displacement tolerance.
    Returns per-block (x, value of the continuous part).
    """
    X, fX = _pgd_batch(inst, V, X0, max(tol, 1e-6), max_iter=600)
    finalists = []
    offset = 0
    for m in sizes:
        k = int(np.argmin(fX[offset:offset + m]))
        finalists.append(offset + k)
        offset += m
    idx = np.array(finalists)
    Xf, ff = _pgd_batch(inst, V[idx], X[idx], tol, max_iter=2000)
    return Xf, ff


def minimize_over_box(inst: ProblemInstance, v, cfg: OracleConfig | None = None) -> tuple[np.ndarray, float]:
    """Best local minimum of the continuous quartic over the box [-v, v]."""
    cfg = cfg or OracleConfig()
    v = np.asarray(v, dtype=float)
    if inst.n > cfg.max_n:
        raise TooLarge(f"oracle supports n <= {cfg.max_n}, got {inst.n}")
    rng = np.random.default_rng(cfg.seed)
    base_draw = rng.uniform(-1.0, 1.0, size=(cfg.n_starts, inst.n))
    X0 = _seed_block(inst, v, cfg, base_draw)
    V = np.broadcast_to(v, X0.shape).copy()
    Xf, ff = _pgd_two_phase(inst, V, X0, [X0.shape[0]], cfg.descent_tol)
    return Xf[0].copy(), float(ff[0] - inst.f @ v)


def brute_force_solve(inst: ProblemInstance, cfg: OracleConfig | None = None) -> tuple[PrimalPoint, float]:
    """Global minimum over all binary v, tie-broken by lexicographically smallest v."""
    cfg = cfg or OracleConfig()
    n = inst.n
    if n > cfg.max_n:
        raise TooLarge(f"oracle supports n <= {cfg.max_n}, got {n}")
    rng = np.random.default_rng(cfg.seed)
    base_draw = rng.uniform(-1.0, 1.0, size=(cfg.n_starts, n))

    vs = [np.array(bits, dtype=float) for bits in product((0, 1), repeat=n)]
    blocks = [_seed_block(inst, v, cfg, base_draw) for v in vs]
    sizes = [b.shape[0] for b in blocks]
    if sum(sizes) > _MAX_BATCH_ROWS:
        raise TooLarge("seed batch too large; lower grid_per_dim or n")
    X0 = np.vstack(blocks)
    V = np.vstack([np.broadcast_to(v, (m, n)) for v, m in zip(vs, sizes)])
    Xf, ff = _pgd_two_phase(inst, V, X0, sizes, cfg.descent_tol)

    best_val = np.inf
    best_x = None
    best_v = None
    for k, v in enumerate(vs):
        val = float(ff[k] - inst.f @ v)
        if best_x is None or val < best_val - _TIE_EPS * (1.0 + abs(val)):
            best_val = val
            best_x = Xf[k].copy()
            best_v = v
    return PrimalPoint(x=best_x, v=best_v), best_val
