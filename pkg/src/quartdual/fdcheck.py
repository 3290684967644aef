"""Central finite-difference helpers for validating analytic derivatives."""
from __future__ import annotations

import numpy as np


def central_gradient(fn, z: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function."""
    z = np.asarray(z, dtype=float)
    g = np.empty_like(z)
    for i in range(z.size):
        step = h * (1.0 + abs(z[i]))
        zp = z.copy()
        zm = z.copy()
        zp[i] += step
        zm[i] -= step
        g[i] = (fn(zp) - fn(zm)) / (2.0 * step)
    return g


def central_hessian_from_grad(grad_fn, z: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central-difference Hessian built from an analytic gradient."""
    z = np.asarray(z, dtype=float)
    m = z.size
    H = np.empty((m, m))
    for i in range(m):
        step = h * (1.0 + abs(z[i]))
        zp = z.copy()
        zm = z.copy()
        zp[i] += step
        zm[i] -= step
        H[:, i] = (grad_fn(zp) - grad_fn(zm)) / (2.0 * step)
    return 0.5 * (H + H.T)


def max_rel_err(approx: np.ndarray, exact: np.ndarray) -> float:
    """Max elementwise |approx - exact| / (1 + |exact|)."""
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    return float(np.max(np.abs(approx - exact) / (1.0 + np.abs(exact)), initial=0.0))
