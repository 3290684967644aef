"""Command-line front end.

Subcommands: solve | oracle | decoupled | reproduce | gradcheck.
Exit codes: 0 certified success / all comparisons pass, 1 input error,
2 solver non-certification or comparison failure.

JSON reports are deterministic byte-for-byte for a fixed seed: volatile
fields (wall time) go to stderr, never into the JSON document.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import fixtures
from .decoupled import decoupled_candidates, enumerate_critical_points, theorem5_solve
from .dualcore import ReducedDualPoint, build_G, dual_derivatives, dual_value, \
    reduced_dual_derivatives, reduced_dual_value, sigma2_star, in_S_reduced, DualPoint
from .errors import NotDiagonal, ProblemFileError, QuartDualError, TooLarge, ZeroC
from .fdcheck import central_gradient, central_hessian_from_grad, max_rel_err
from .instance import ProblemInstance, validate_instance
from .matkernel import eigen_summary
from .oracle import OracleConfig, brute_force_solve
from .probfile import (
    canonical_text,
    instance_digest,
    load_problem,
    parse_problem_text,
    vector_list,
)
from .solver import CERT_GLOBAL, SolveReport, SolverConfig, solve
from .solver import _initial_point  # deterministic interior seed for gradcheck


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _fmt_vec(arr) -> str:
    return "(" + ", ".join(_fmt(float(v)) for v in np.asarray(arr).ravel()) + ")"


def _solve_report_dict(rep: SolveReport) -> dict:
    return {
        "dual": {"sigma0": rep.dual.sigma0, "sigma1": vector_list(rep.dual.sigma1)},
        "sigma2": vector_list(rep.sigma2),
        "dual_value": rep.dual_value,
        "primal": {"x": vector_list(rep.primal.x), "v": vector_list(rep.primal.v)},
        "primal_value": rep.primal_value,
        "gap": rep.gap,
        "lambda_min_G": rep.lambda_min_G,
        "kkt": {
            "xi": rep.kkt.xi,
            "eps1": vector_list(rep.kkt.eps1),
            "eps2": vector_list(rep.kkt.eps2),
            "comp1": rep.kkt.comp1,
            "comp2": rep.kkt.comp2,
            "stationarity_sigma0": rep.kkt.stationarity_sigma0,
            "max_violation": rep.kkt.max_violation,
        },
        "certificate": rep.certificate,
        "uniqueness_flags": {
            "A_B_diagonal": rep.uniqueness_flags.A_B_diagonal,
            "c_nowhere_zero": rep.uniqueness_flags.c_nowhere_zero,
        },
        "iterations": rep.iterations,
    }


def _emit(run_report: dict, as_json: bool, human_lines: list[str], wall_ms: int):
    if as_json:
        print(json.dumps(run_report, sort_keys=True, separators=(",", ":")))
        print(f"wall_time_ms: {wall_ms}", file=sys.stderr)
    else:
        for line in human_lines:
            print(line)
        print(f"wall time: {wall_ms} ms")


def _load(path: str):
    inst, digest, corrections = load_problem(path)
    for note in corrections:
        print(f"note: {note}", file=sys.stderr)
    problems = validate_instance(inst)
    if problems:
        raise ProblemFileError("; ".join(problems))
    return inst, digest


def cmd_solve(args) -> int:
    inst, digest = _load(args.path)
    cfg = SolverConfig(seed=args.seed, gap_tol=args.tol if args.tol is not None else 1e-6)
    t0 = time.perf_counter()
    rep = solve(inst, cfg)
    wall_ms = int(1000 * (time.perf_counter() - t0))
    run = {"command": "solve", "instance_digest": digest, "report": _solve_report_dict(rep)}
    human = [
        f"dual point: sigma0 = {_fmt(rep.dual.sigma0)}, sigma1 = {_fmt_vec(rep.dual.sigma1)}",
        f"sigma2 = {_fmt_vec(rep.sigma2)}",
        f"lambda_min(G) = {_fmt(rep.lambda_min_G)}",
        f"primal point: x = {_fmt_vec(rep.primal.x)}, v = {_fmt_vec(rep.primal.v)}",
        f"dual value = {_fmt(rep.dual_value)}, primal value = {_fmt(rep.primal_value)}",
        f"gap = {_fmt(rep.gap)}",
        f"KKT max violation = {_fmt(rep.kkt.max_violation)}",
        f"certificate: {rep.certificate}",
        f"uniqueness flags: A,B diagonal = {rep.uniqueness_flags.A_B_diagonal}, "
        f"c nowhere zero = {rep.uniqueness_flags.c_nowhere_zero}",
        f"iterations: {rep.iterations}",
    ]
    _emit(run, args.json, human, wall_ms)
    return 0 if rep.certificate == CERT_GLOBAL else 2


def cmd_oracle(args) -> int:
    inst, digest = _load(args.path)
    cfg = OracleConfig(n_starts=args.starts, seed=args.seed)
    t0 = time.perf_counter()
    point, value = brute_force_solve(inst, cfg)
    wall_ms = int(1000 * (time.perf_counter() - t0))
    report = {
        "x": vector_list(point.x),
        "v": vector_list(point.v),
        "value": value,
        "n_starts": cfg.n_starts,
    }
    run = {"command": "oracle", "instance_digest": digest, "report": report}
    human = [
        f"brute-force optimum: value = {_fmt(value)}",
        f"x = {_fmt_vec(point.x)}",
        f"v = {_fmt_vec(point.v)}",
    ]
    if args.verbose:
        from itertools import product
        from .oracle import minimize_over_box

        human.append("per-v table:")
        for bits in product((0, 1), repeat=inst.n):
            v = np.array(bits, dtype=float)
            _, val = minimize_over_box(inst, v, cfg)
            human.append(f"  v = {_fmt_vec(v)} -> {_fmt(val)}")
    _emit(run, args.json, human, wall_ms)
    return 0


def cmd_decoupled(args) -> int:
    inst, digest = _load(args.path)
    t0 = time.perf_counter()
    cand = decoupled_candidates(inst)
    sol = theorem5_solve(inst)
    wall_ms = int(1000 * (time.perf_counter() - t0))
    report = {
        "sigma0_star": cand.sigma0_star,
        "M": [vector_list(row) for row in cand.M],
        "N": [vector_list(row) for row in cand.N],
        "closed_form_applies": sol is not None,
    }
    human = [f"sigma0* = {_fmt(cand.sigma0_star)}", "   i          M_i   max          N_i   max"]
    for i in range(inst.n):
        human.append(
            f"  {i + 1:2d}  {_fmt(cand.M[i, 0]):>7}, {_fmt(cand.M[i, 1]):>7}  {_fmt(cand.M[i].max()):>5}"
            f"  {_fmt(cand.N[i, 0]):>7}, {_fmt(cand.N[i, 1]):>7}  {_fmt(cand.N[i].max()):>5}"
        )
    if sol is not None:
        dual, primal, value = sol
        report["solution"] = {
            "sigma1": vector_list(dual.sigma1),
            "sigma2": vector_list(dual.sigma2),
            "x": vector_list(primal.x),
            "v": vector_list(primal.v),
            "value": value,
        }
        human += [
            "closed-form conditions hold:",
            f"  sigma1 = {_fmt_vec(dual.sigma1)}",
            f"  sigma2 = {_fmt_vec(dual.sigma2)}",
            f"  x = {_fmt_vec(primal.x)}, v = {_fmt_vec(primal.v)}",
            f"  value = {_fmt(value)}",
        ]
    else:
        human.append("closed-form conditions do not hold (max M_i or max N_i <= 0 somewhere)")
    run = {"command": "decoupled", "instance_digest": digest, "report": report}
    _emit(run, args.json, human, wall_ms)
    return 0


def _close(actual, expected, tol) -> bool:
    return bool(np.max(np.abs(np.asarray(actual, float) - np.asarray(expected, float)), initial=0.0) <= tol)


def _reproduce_one(k: int, verbose: bool) -> bool:
    inst = fixtures.example_instance(k)
    exp = fixtures.EXPECTED[k]
    rep = solve(inst)
    checks: list[tuple[str, bool]] = []

    if "M" in exp:
        cand = decoupled_candidates(inst)
        checks.append(("M table", _close(cand.M, exp["M"], 1e-12)))
        checks.append(("N table", _close(cand.N, exp["N"], 1e-12)))
        sol = theorem5_solve(inst)
        if exp["theorem5"]:
            ok = sol is not None
            if ok:
                _, primal, value = sol
                ok = _close(value, exp["value"][0], exp["value"][1]) and _close(
                    primal.x, exp["x"][0], exp["x"][1]
                )
            checks.append(("closed form", ok))
        else:
            checks.append(("closed form not applicable", sol is None))

    if "sigma0" in exp:
        checks.append(("sigma0", _close(rep.dual.sigma0, *exp["sigma0"])))
    if "sigma1" in exp:
        checks.append(("sigma1", _close(rep.dual.sigma1, *exp["sigma1"])))
    if "sigma2" in exp:
        checks.append(("sigma2", _close(rep.sigma2, *exp["sigma2"])))
    checks.append(("value", _close(rep.primal_value, *exp["value"])
                   and _close(rep.dual_value, *exp["value"])))
    if "lambda_min" in exp:
        checks.append(("lambda_min", _close(rep.lambda_min_G, *exp["lambda_min"])))
    checks.append(("x", _close(rep.primal.x, *exp["x"])))
    checks.append(("v", _close(rep.primal.v, exp["v"], 0.0)))
    if "gap_max" in exp:
        checks.append(("gap", rep.gap <= exp["gap_max"]))

    all_ok = True
    for name, ok in checks:
        all_ok &= ok
        print(f"example {k}: {name:<28s} {'PASS' if ok else 'FAIL'}")
        if verbose and not ok:
            print(f"  solve report: value={rep.primal_value!r} dual={rep.dual_value!r} "
                  f"lambda_min={rep.lambda_min_G!r} x={vector_list(rep.primal.x)!r}")
    return all_ok


def cmd_reproduce(args) -> int:
    which = list(fixtures.EXAMPLE_IDS) if args.which == "all" else [int(args.which)]
    ok = True
    for k in which:
        ok &= _reproduce_one(k, args.verbose)
    print(("all comparisons PASS" if ok else "some comparisons FAIL")
          + f" ({len(which)} example(s))")
    return 0 if ok else 2


def _gradcheck_samples(inst: ProblemInstance, k: int, seed: int):
    """Deterministic interior sample points, kept clear of the kinks."""
    rng = np.random.default_rng(seed)
    z0 = _initial_point(inst)
    samples = []
    guard = 0
    while len(samples) < k and guard < 200 * k:
        guard += 1
        sig0 = z0[0] + rng.uniform(-0.2, 2.0)
        s1 = z0[1:] * rng.uniform(0.8, 3.0, inst.n) + rng.uniform(0.0, 2.0, inst.n)
        q = ReducedDualPoint(sigma0=sig0, sigma1=s1)
        if not in_S_reduced(inst, q):
            continue
        if np.min(np.abs(inst.f + s1)) < 1e-2:
            continue
        if eigen_summary(build_G(inst, q)).lambda_min < 1e-3:
            continue
        samples.append(q)
    return samples


def cmd_gradcheck(args) -> int:
    inst, _digest = _load(args.path)
    samples = _gradcheck_samples(inst, args.samples, args.seed)
    if not samples:
        print("gradcheck: could not sample interior points", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed + 1)
    worst = 0.0
    worst_point = None
    for q in samples:
        val, grad = reduced_dual_derivatives(inst, q)
        z = np.concatenate([[q.sigma0], q.sigma1])

        def red_val(zv):
            return reduced_dual_value(inst, ReducedDualPoint(sigma0=zv[0], sigma1=zv[1:]))

        err = max_rel_err(central_gradient(red_val, z), grad)

        s2 = sigma2_star(inst, q) * rng.uniform(0.5, 1.5, inst.n)
        d = DualPoint(sigma0=q.sigma0, sigma1=q.sigma1, sigma2=s2)
        ders = dual_derivatives(inst, d)
        zfull = np.concatenate([[d.sigma0], d.sigma1, d.sigma2])

        def full_val(zv):
            return dual_value(
                inst,
                DualPoint(sigma0=zv[0], sigma1=zv[1:inst.n + 1], sigma2=zv[inst.n + 1:]),
            )

        def full_grad(zv):
            return dual_derivatives(
                inst,
                DualPoint(sigma0=zv[0], sigma1=zv[1:inst.n + 1], sigma2=zv[inst.n + 1:]),
            ).gradient

        err = max(err, max_rel_err(central_gradient(full_val, zfull), ders.gradient))
        err = max(err, max_rel_err(central_hessian_from_grad(full_grad, zfull), ders.hessian))
        if err > worst:
            worst = err
            worst_point = (q.sigma0, vector_list(q.sigma1))
    print(f"gradcheck: {len(samples)} points, max relative error = {worst:.3e}")
    if worst > 1e-4:
        print(f"gradcheck FAILED at sigma0={worst_point[0]!r}, sigma1={worst_point[1]!r}",
              file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quartdual",
        description="Mixed-integer quartic minimization with fixed costs via a concave dual.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, path=True):
        if path:
            p.add_argument("path", help="problem file (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("solve", help="run the dual solver and certify")
    add_common(p)
    p.add_argument("--tol", type=float, default=None, help="duality-gap tolerance for certification")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force global minimum (small n)")
    add_common(p)
    p.add_argument("--starts", type=int, default=32, help="random multi-starts per box")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("decoupled", help="closed-form analysis of a diagonal instance")
    add_common(p)
    p.set_defaults(fn=cmd_decoupled)

    p = sub.add_parser("reproduce", help="re-run the shipped benchmark instances")
    p.add_argument("which", choices=[str(k) for k in fixtures.EXAMPLE_IDS] + ["all"])
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=cmd_reproduce)

    p = sub.add_parser("gradcheck", help="finite-difference check of the analytic derivatives")
    add_common(p)
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(fn=cmd_gradcheck)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ProblemFileError, NotDiagonal, ZeroC, TooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QuartDualError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
