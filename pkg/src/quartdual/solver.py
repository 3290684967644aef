"""Log-barrier Newton maximization of the reduced dual with certification.

The solver maximizes the concave reduced dual over its positive cone with
log barriers on sigma0 + alpha, each sigma1_i, and det G.  The
piecewise-linear positive-part term is smoothed along the barrier path (the
smoothing width shrinks with the barrier weight) so every inner problem is
C2 and strictly concave; a final polish clamps boundary-active sigma1
coordinates to exactly zero and runs exact Newton steps on the unsmoothed
objective.  Certification then compares the recovered primal value against
the dual value and checks cone membership and binary feasibility.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dualcore import (
    TIE_TOL,
    ReducedDualPoint,
    build_G,
    recover_primal,
    reduced_dual_derivatives,
    reduced_dual_hessian,
    reduced_dual_value,
    in_S_reduced,
    sigma2_star,
)
from .errors import NoInteriorPoint
from .instance import (
    PrimalPoint,
    ProblemInstance,
    check_binary_feasible,
    evaluate_primal,
    validate_instance,
)
from .matkernel import cholesky_pd_check, eigen_summary, inverse_pd, logdet_pd, solve_pd

CERT_GLOBAL = "GlobalOptimal"
CERT_KKT = "KKTOnly"
CERT_FAILED = "Failed"

_MU_MIN = 1e-10
_ACTIVITY_TOL = 1e-7
_KINK_MARGIN = 1e-9
_ARMIJO_C = 1e-4


@dataclass(frozen=True)
class SolverConfig:
    grad_tol: float = 1e-9
    barrier_mu0: float = 1.0
    barrier_shrink: float = 0.2
    max_outer: int = 40
    max_inner: int = 200
    gap_tol: float = 1e-6
    seed: int = 0  # the algorithm is deterministic; kept for config parity

    def __post_init__(self):
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0.0 < self.barrier_shrink < 1.0:
            raise ValueError("barrier_shrink must lie in (0, 1)")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration caps must be >= 1")


@dataclass(frozen=True)
class UniquenessFlags:
    A_B_diagonal: bool
    c_nowhere_zero: bool


@dataclass(frozen=True)
class KKTReport:
    xi: float
    eps1: np.ndarray
    eps2: np.ndarray
    comp1: float
    comp2: float
    stationarity_sigma0: float
    max_violation: float


@dataclass(frozen=True)
class SolveReport:
    dual: ReducedDualPoint
    sigma2: np.ndarray
    dual_value: float
    primal: PrimalPoint
    primal_value: float
    gap: float
    lambda_min_G: float
    kkt: KKTReport
    certificate: str
    uniqueness_flags: UniquenessFlags
    iterations: int


def uniqueness_flags(inst: ProblemInstance) -> UniquenessFlags:
    """Structural hypotheses under which the recovered minimizer is unique."""
    if inst.A.is_diagonal and inst.B.is_diagonal:
        diag = True
    else:
        a = inst.A.entries
        b = inst.B.entries
        off = max(
            float(np.max(np.abs(a - np.diag(np.diagonal(a))), initial=0.0)),
            float(np.max(np.abs(b - np.diag(np.diagonal(b))), initial=0.0)),
        )
        diag = off <= 1e-12
    c_ok = bool(np.min(np.abs(inst.c), initial=np.inf) > 1e-12)
    return UniquenessFlags(A_B_diagonal=diag, c_nowhere_zero=c_ok)


def verify_kkt(inst: ProblemInstance, q: ReducedDualPoint) -> KKTReport:
    """KKT residuals at the primal/dual pair recovered from q."""
    p = recover_primal(inst, q)
    s2 = sigma2_star(inst, q)
    x, v = p.x, p.v
    if inst.B.is_diagonal:
        xbx = float(inst.B.data @ (x * x))
    else:
        xbx = float(x @ inst.B.entries @ x)
    xi = 0.5 * xbx - inst.alpha
    eps1 = x * x - v
    eps2 = v * v - v
    comp1 = float(q.sigma1 @ eps1)
    comp2 = float(s2 @ eps2)
    stat0 = abs(xi - q.sigma0)
    max_violation = max(
        abs(comp1),
        abs(comp2),
        stat0,
        float(np.max(np.maximum(eps1, 0.0), initial=0.0)),
        float(np.max(np.abs(eps2), initial=0.0)),
    )
    return KKTReport(
        xi=xi,
        eps1=eps1,
        eps2=eps2,
        comp1=comp1,
        comp2=comp2,
        stationarity_sigma0=stat0,
        max_violation=max_violation,
    )


# ---------------------------------------------------------------------------
# barrier machinery
# ---------------------------------------------------------------------------

def _smooth_plus(t: np.ndarray, width: float):
    """Smoothed positive part 0.5 (t + sqrt(t^2 + 4 w^2)) with derivatives."""
    r = np.sqrt(t * t + 4.0 * width * width)
    val = 0.5 * (t + r)
    d1 = 0.5 * (1.0 + t / r)
    d2 = 2.0 * width * width / (r * r * r)
    return val, d1, d2


def _pd_logdet(G) -> float | None:
    """Fast positive-definite gate; log det G on success, None otherwise."""
    if G.is_diagonal:
        if np.any(G.data <= 0.0):
            return None
        return float(np.sum(np.log(G.data)))
    try:
        L = np.linalg.cholesky(G.entries)
    except np.linalg.LinAlgError:
        return None
    return 2.0 * float(np.sum(np.log(np.diagonal(L))))


def _barrier_value(inst: ProblemInstance, z: np.ndarray, mu: float):
    """Barrier objective at z = (sigma0, sigma1); None when z is infeasible."""
    sig0, s1 = z[0], z[1:]
    if sig0 + inst.alpha <= 0.0 or np.any(s1 <= 0.0):
        return None
    G = build_G(inst, ReducedDualPoint(sigma0=sig0, sigma1=s1))
    logdet = _pd_logdet(G)
    if logdet is None:
        return None
    try:
        x = solve_pd(G, inst.c)
    except np.linalg.LinAlgError:
        return None
    phi, _, _ = _smooth_plus(inst.f + s1, mu)
    core = -0.5 * inst.c @ x - np.sum(phi) - 0.5 * sig0**2 - inst.alpha * sig0
    barrier = np.log(sig0 + inst.alpha) + np.sum(np.log(s1)) + logdet
    return float(core + mu * barrier)


def _barrier_derivatives(inst: ProblemInstance, z: np.ndarray, mu: float):
    """Gradient and Hessian of the barrier objective (assumes z feasible)."""
    n = inst.n
    sig0, s1 = z[0], z[1:]
    G = build_G(inst, ReducedDualPoint(sigma0=sig0, sigma1=s1))
    Ginv = inverse_pd(G)
    x = Ginv @ inst.c
    B = inst.B.entries
    Bx = B @ x
    w = Ginv @ Bx
    _, d1, d2 = _smooth_plus(inst.f + s1, mu)
    slack0 = sig0 + inst.alpha
    GinvB = Ginv @ B
    gbg_diag = np.einsum("ij,ji->i", GinvB, Ginv)

    grad = np.empty(n + 1)
    grad[0] = 0.5 * x @ Bx - sig0 - inst.alpha + mu * (1.0 / slack0 + np.trace(GinvB))
    grad[1:] = x * x - d1 + mu * (1.0 / s1 + 2.0 * np.diagonal(Ginv))

    hess = np.empty((n + 1, n + 1))
    hess[0, 0] = -(1.0 + Bx @ w) - mu * (np.sum(GinvB * GinvB.T) + 1.0 / slack0**2)
    cross = -2.0 * x * w - 2.0 * mu * gbg_diag
    hess[0, 1:] = cross
    hess[1:, 0] = cross
    hess[1:, 1:] = (
        -4.0 * np.outer(x, x) * Ginv
        - np.diag(d2)
        - mu * (np.diag(1.0 / (s1 * s1)) + 4.0 * Ginv * Ginv)
    )
    return grad, 0.5 * (hess + hess.T)


def _line_search(inst, z, d, f0, slope, mu):
    """Backtracking Armijo step along d; returns (z_new, f_new) or None."""
    step = 1.0
    for _ in range(60):
        trial = z + step * d
        f_trial = _barrier_value(inst, trial, mu)
        if f_trial is not None and f_trial >= f0 + _ARMIJO_C * step * slope:
            return trial, f_trial
        step *= 0.5
    return None


def _newton_stage(inst, z, mu, tol, max_inner):
    """Damped Newton on one barrier subproblem.  Returns (z, value, iters).

    Once the quadratic-model ascent drops below the float resolution of the
    objective (which happens early when the barrier Hessian is stiff near an
    active boundary), Armijo can no longer certify progress; the loop then
    accepts full Newton steps on gradient-norm decrease and otherwise stops.
    """
    f0 = _barrier_value(inst, z, mu)
    if f0 is None:
        raise NoInteriorPoint("barrier stage started at an infeasible point")
    try:
        grad, hess = _barrier_derivatives(inst, z, mu)
    except np.linalg.LinAlgError:
        return z, f0, 0
    iters = 0
    for _ in range(max_inner):
        gnorm = float(np.max(np.abs(grad)))
        if gnorm <= tol:
            break
        try:
            d = np.linalg.solve(-hess, grad)
        except np.linalg.LinAlgError:
            d = grad.copy()
        slope = float(grad @ d)
        if slope <= 0.0:
            d = grad.copy()
            slope = float(grad @ grad)
        noise = 64.0 * np.finfo(float).eps * (1.0 + abs(f0))

        accepted = None
        try:
            if _ARMIJO_C * slope <= noise:
                trial = z + d
                fv = _barrier_value(inst, trial, mu)
                if fv is not None and fv >= f0 - noise:
                    g_t, h_t = _barrier_derivatives(inst, trial, mu)
                    if float(np.max(np.abs(g_t))) <= 0.9 * gnorm:
                        accepted = (trial, fv, g_t, h_t)
                if accepted is None:
                    break  # at float resolution for this subproblem
            else:
                hit = _line_search(inst, z, d, f0, slope, mu)
                if hit is None and not np.array_equal(d, grad):
                    # Newton step failed Armijo; fall back to the gradient direction.
                    d = grad.copy()
                    hit = _line_search(inst, z, d, f0, float(grad @ grad), mu)
                if hit is not None:
                    g_t, h_t = _barrier_derivatives(inst, hit[0], mu)
                    accepted = (hit[0], hit[1], g_t, h_t)
        except np.linalg.LinAlgError:
            accepted = None
        if accepted is None:
            break
        z, f0, grad, hess = accepted
        iters += 1
    return z, f0, iters


def _initial_point(inst: ProblemInstance) -> np.ndarray:
    """Interior starting point: sigma0 from the trace heuristic, uniform sigma1."""
    trace_b = float(np.sum(inst.B.diag))
    sig0 = max(0.0, 0.5 * trace_b - inst.alpha)
    sig0 = max(sig0, -inst.alpha + 0.5)
    for k in range(64):
        s = 0.5 * (2.0**k)
        G = build_G(inst, ReducedDualPoint(sigma0=sig0, sigma1=np.full(inst.n, s)))
        if eigen_summary(G).lambda_min >= 0.1:
            return np.concatenate([[sig0], np.full(inst.n, s)])
    raise NoInteriorPoint("could not make G positive definite at initialization")


# ---------------------------------------------------------------------------
# polish: exact Newton with an active set on sigma1 >= 0
# ---------------------------------------------------------------------------

def _ensure_well_conditioned(inst, z):
    """Shift sigma1 uniformly so G stays comfortably invertible.

    When the dual supremum sits on the det G = 0 boundary (no interior
    critical point), the barrier path ends with G nearly singular; exact
    evaluation there would fail.  Adding delta to every sigma1 raises
    lambda_min(G) by exactly 2 delta and keeps the point in the cone; the
    resulting report then carries an honest nonzero gap.
    """
    G = build_G(inst, ReducedDualPoint(sigma0=z[0], sigma1=z[1:]))
    summary = eigen_summary(G)
    target = 1e-8 * (1.0 + abs(summary.lambda_max))
    if summary.lambda_min < target:
        z = z.copy()
        z[1:] = z[1:] + 0.5 * (target - summary.lambda_min)
    return z


def _nudge_off_kinks(inst, z):
    s1 = z[1:]
    t = inst.f + s1
    for i in np.flatnonzero(np.abs(t) < _KINK_MARGIN):
        side = -1.0 if t[i] <= 0.0 else 1.0
        cand = -inst.f[i] + side * _KINK_MARGIN
        if cand < 0.0:
            cand = -inst.f[i] + _KINK_MARGIN
        s1[i] = cand
    return z


def _projected_grad_norm(grad, s1, active):
    pg = grad.copy()
    for i in active:
        pg[i + 1] = max(grad[i + 1], 0.0)
    return float(np.max(np.abs(pg)))


def _polish(inst: ProblemInstance, z: np.ndarray, cfg: SolverConfig):
    """Clamp boundary-active sigma1 coordinates and Newton-polish the rest.

    Returns (z, projected_gradient_norm, iterations).  Stalls (for example
    when the optimum sits on a kink of the positive-part term) terminate the
    loop with the best iterate found.
    """
    z = _ensure_well_conditioned(inst, z.copy())
    z = _nudge_off_kinks(inst, z)
    n = inst.n

    def q_of(zv):
        return ReducedDualPoint(sigma0=zv[0], sigma1=zv[1:])

    val, grad = reduced_dual_derivatives(inst, q_of(z))
    active = set(int(i) for i in np.flatnonzero(z[1:] <= _ACTIVITY_TOL)
                 if grad[i + 1] <= cfg.grad_tol)
    if active:
        trial = z.copy()
        trial[1 + np.array(sorted(active))] = 0.0
        if cholesky_pd_check(build_G(inst, q_of(trial))):
            z = trial
            val, grad = reduced_dual_derivatives(inst, q_of(z))
        else:
            active = set()

    best = (z.copy(), _projected_grad_norm(grad, z[1:], active))
    target = max(cfg.grad_tol * 1e-4, 1e-14)
    stalls = 0
    iters = 0
    for _ in range(60):
        pg_norm = _projected_grad_norm(grad, z[1:], active)
        if pg_norm < best[1]:
            best = (z.copy(), pg_norm)
        if pg_norm <= target or stalls >= 2:
            break
        # release mistakenly clamped coordinates
        released = False
        for i in sorted(active):
            if grad[i + 1] > cfg.grad_tol:
                bump = _ACTIVITY_TOL
                if inst.f[i] < 0.0:
                    bump = min(bump, 0.5 * abs(inst.f[i]))
                z[i + 1] = max(z[i + 1], bump)
                active.discard(i)
                released = True
        if released:
            val, grad = reduced_dual_derivatives(inst, q_of(z))
            continue

        free = [0] + [i + 1 for i in range(n) if i not in active]
        hess = reduced_dual_hessian(inst, q_of(z))
        h_free = hess[np.ix_(free, free)]
        g_free = grad[free]
        lm = 1e-12 * (1.0 + float(np.max(np.abs(h_free), initial=0.0)))
        d_free = np.linalg.solve(-h_free + lm * np.eye(len(free)), g_free)
        norm_d = float(np.linalg.norm(d_free))
        cap = 10.0 * (1.0 + float(np.linalg.norm(z)))
        if norm_d > cap:
            d_free *= cap / norm_d
        d = np.zeros(n + 1)
        d[free] = d_free

        # step limits: keep free sigma1 >= 0 and stop short of kink crossings
        step_cap = 1.0
        for i in range(n):
            if i in active:
                continue
            di = d[i + 1]
            if di < 0.0 and z[i + 1] + di * step_cap < 0.0:
                step_cap = min(step_cap, -z[i + 1] / di)
            t_i = inst.f[i] + z[i + 1]
            if di != 0.0 and t_i * (t_i + di * step_cap) < 0.0:
                step_cap = min(step_cap, (abs(t_i) - _KINK_MARGIN) / abs(di))
        step_cap = max(step_cap, 0.0)

        slope = float(grad @ d)
        # Near the optimum the predicted ascent sinks below the float
        # resolution of the objective; there a step is accepted on gradient
        # norm decrease instead of the Armijo value test.
        noise_floor = 64.0 * np.finfo(float).eps * (1.0 + abs(val))
        accepted = None
        step = step_cap
        for _bt in range(60):
            if step <= 0.0:
                break
            trial = z + step * d
            np.clip(trial[1:], 0.0, None, out=trial[1:])
            q_trial = q_of(trial)
            if cholesky_pd_check(build_G(inst, q_trial)) and np.all(
                np.abs(inst.f + trial[1:]) > TIE_TOL
            ):
                try:
                    v_trial, g_trial = reduced_dual_derivatives(inst, q_trial)
                except Exception:
                    v_trial = None
                if v_trial is not None:
                    predicted = _ARMIJO_C * step * slope
                    if v_trial >= val + predicted:
                        accepted = (trial, v_trial, g_trial)
                        break
                    if predicted <= noise_floor and _projected_grad_norm(
                        g_trial, trial[1:], active
                    ) <= 0.9 * pg_norm:
                        accepted = (trial, v_trial, g_trial)
                        break
            step *= 0.5
        if accepted is None:
            stalls += 1
            continue
        z, val, grad = accepted
        iters += 1
        # snap coordinates that hit the boundary
        for i in range(n):
            if i not in active and z[i + 1] <= TIE_TOL:
                z[i + 1] = 0.0
                active.add(i)

    pg_norm = _projected_grad_norm(grad, z[1:], active)
    if pg_norm < best[1]:
        best = (z.copy(), pg_norm)
    return best[0], best[1], iters


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def solve(inst: ProblemInstance, cfg: SolverConfig | None = None) -> SolveReport:
    """Maximize the reduced dual, recover the primal, and certify.

    Certificates: GlobalOptimal when the dual point lies in the positive
    cone, G is positive definite, the duality gap is within gap_tol, and the
    recovered primal is binary feasible; KKTOnly when the run produced a
    coherent near-stationary report without meeting all certificate
    conditions; Failed otherwise.
    """
    cfg = cfg or SolverConfig()
    problems = validate_instance(inst)
    if problems:
        raise ValueError("invalid instance: " + "; ".join(problems))

    z = _initial_point(inst)
    iterations = 0
    mu = cfg.barrier_mu0
    for _ in range(cfg.max_outer):
        # Value-based line searches cannot certify progress below float
        # resolution, so the path stops at a loose tolerance and the exact
        # Newton polish owns the endgame.
        tol = max(0.1 * mu, 1e-8)
        z, _, used = _newton_stage(inst, z, mu, tol, cfg.max_inner)
        iterations += used
        if mu < _MU_MIN:
            break
        mu *= cfg.barrier_shrink

    z, pg_norm, polish_iters = _polish(inst, z, cfg)
    iterations += polish_iters
    z = _ensure_well_conditioned(inst, z)

    q = ReducedDualPoint(sigma0=float(z[0]), sigma1=z[1:])
    s2 = sigma2_star(inst, q)
    primal = recover_primal(inst, q)
    kkt = verify_kkt(inst, q)
    dual_val = reduced_dual_value(inst, q)
    primal_val = evaluate_primal(inst, primal)
    gap = abs(primal_val - dual_val)
    lam_min = eigen_summary(build_G(inst, q)).lambda_min
    flags = uniqueness_flags(inst)

    if (
        in_S_reduced(inst, q)
        and lam_min > 0.0
        and gap <= cfg.gap_tol
        and check_binary_feasible(primal)
    ):
        certificate = CERT_GLOBAL
    elif kkt.max_violation <= 1e-3:
        certificate = CERT_KKT
    else:
        certificate = CERT_FAILED

    return SolveReport(
        dual=q,
        sigma2=s2,
        dual_value=dual_val,
        primal=primal,
        primal_value=primal_val,
        gap=gap,
        lambda_min_G=lam_min,
        kkt=kkt,
        certificate=certificate,
        uniqueness_flags=flags,
        iterations=iterations,
    )
