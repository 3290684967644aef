"""Shared helpers: instance generators, sample-point builders, and
finite-difference oracles kept independent of the package's own helpers."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from quartdual.dualcore import DualPoint, ReducedDualPoint, build_G, in_S_reduced
from quartdual.fixtures import example_instance
from quartdual.instance import ProblemInstance
from quartdual.matkernel import eigen_summary


@lru_cache(maxsize=None)
def example(k: int) -> ProblemInstance:
    return example_instance(k)


@pytest.fixture
def ex():
    return example


def fd_gradient(fn, z, h=1e-6):
    z = np.asarray(z, dtype=float)
    g = np.empty_like(z)
    for i in range(z.size):
        step = h * (1.0 + abs(z[i]))
        zp, zm = z.copy(), z.copy()
        zp[i] += step
        zm[i] -= step
        g[i] = (fn(zp) - fn(zm)) / (2.0 * step)
    return g


def fd_hessian(grad_fn, z, h=1e-6):
    z = np.asarray(z, dtype=float)
    m = z.size
    H = np.empty((m, m))
    for i in range(m):
        step = h * (1.0 + abs(z[i]))
        zp, zm = z.copy(), z.copy()
        zp[i] += step
        zm[i] -= step
        H[:, i] = (grad_fn(zp) - grad_fn(zm)) / (2.0 * step)
    return 0.5 * (H + H.T)


def rel_err(approx, exact):
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    return float(np.max(np.abs(approx - exact) / (1.0 + np.abs(exact)), initial=0.0))


def random_instance(rng, n, diagonal=True, zero_c=0):
    """Random valid instance; optionally force some c entries to zero."""
    alpha = float(rng.uniform(0.5, 5.0))
    if diagonal:
        a = rng.uniform(-3.0, 5.0, n)
        b = rng.uniform(0.0, 4.0, n)
    else:
        ma = rng.normal(size=(n, n))
        a = (ma + ma.T)
        mb = rng.normal(size=(n, n))
        b = (mb @ mb.T) / n * 2.0
    c = rng.uniform(-4.0, 4.0, n)
    c[np.abs(c) < 0.1] = 0.5  # keep clear of accidental zeros
    if zero_c:
        c[rng.choice(n, size=min(zero_c, n), replace=False)] = 0.0
    f = rng.uniform(-5.0, 5.0, n)
    inst, _ = ProblemInstance.build(a, b, alpha, c, f)
    return inst


def theorem5_instance(rng, n=None):
    """Random diagonal instance satisfying the closed-form sign conditions."""
    from quartdual.decoupled import theorem5_solve

    while True:
        m = n or int(rng.integers(2, 9))
        b = rng.uniform(0.5, 3.0, m)
        alpha = 0.5 * float(b.sum()) + float(rng.uniform(1.0, 6.0))
        a = rng.uniform(-2.0, 2.0, m)
        c = rng.choice([-1.0, 1.0], m) * rng.uniform(0.5, 4.0, m)
        f = rng.uniform(0.5, 8.0, m)
        inst, _ = ProblemInstance.build(a, b, alpha, c, f)
        if theorem5_solve(inst) is not None:
            return inst


def sample_reduced_point(rng, inst, kink_margin=0.05):
    """A point of the reduced cone with G comfortably positive definite."""
    n = inst.n
    for _ in range(100):
        sig0 = -inst.alpha + float(rng.uniform(0.2, inst.alpha + 3.0))
        base = build_G(inst, ReducedDualPoint(sigma0=sig0, sigma1=np.zeros(n)))
        lam = eigen_summary(base).lambda_min
        s1 = max(0.0, -0.5 * lam) + 0.05 + rng.uniform(0.05, 2.0, n)
        t = inst.f + s1
        s1 = np.where(np.abs(t) < kink_margin, s1 + 2.0 * kink_margin, s1)
        q = ReducedDualPoint(sigma0=sig0, sigma1=s1)
        if in_S_reduced(inst, q) and np.min(np.abs(inst.f + s1)) > kink_margin:
            return q
    raise AssertionError("failed to sample a reduced-cone point")


def sample_full_point(rng, inst, kink_margin=0.05):
    """A point of the full positive cone (sigma2 strictly positive)."""
    q = sample_reduced_point(rng, inst, kink_margin)
    s2 = (1.0 + np.abs(inst.f + q.sigma1)) * rng.uniform(0.3, 2.0, inst.n)
    return DualPoint(sigma0=q.sigma0, sigma1=q.sigma1, sigma2=s2)


def random_binary_feasible(rng, n):
    v = rng.integers(0, 2, n).astype(float)
    x = rng.uniform(-1.0, 1.0, n) * v
    return x, v
