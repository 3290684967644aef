"""The eight shipped benchmark instances and their expected results.

Instance 8's quadratic matrix is stored with the (2,5)/(5,2) entries both
equal to -2; that symmetric completion is the one whose dual solution
reproduces the published reference results for this instance to all printed
digits (see the repository notes for the cross-checks).

Expected values carry per-field tolerances: exact rationals at 1e-6 or
tighter, 4-significant-digit reference values at 1e-3, 3-digit vector
components at 1e-2.  Fields that are not identified by the optimum (for
example multiplier coordinates that are flat because c_i = 0) are omitted.
"""
from __future__ import annotations

from .instance import ProblemInstance

# Raw problem dictionaries in the problem-file schema (also shipped as
# problems/ex*.json).
PROBLEM_DATA: dict[int, dict] = {
    1: {
        "n": 5,
        "alpha": 10.0,
        "A": {"diag": [1, -1, 1, 5, 2]},
        "B": {"diag": [2, 4, 1, 4, 2]},
        "f": [20, 12, -1, 1, 13],
        "c": [-8, -9, 10, 9, -5],
    },
    2: {
        "n": 8,
        "alpha": 20.0,
        "A": {"diag": [7, 9, 6, -5, 4, 10, 9, 8]},
        "B": {"diag": [3, 5, 4, 3, 1, 7, 5, 7]},
        "f": [13, -3, 3, 11, 10, 16, 16, 14],
        "c": [7, -6, 8, -1, -5, 8, -8, 7],
    },
    3: {
        "n": 10,
        "alpha": 25.0,
        "A": {"diag": [2, 8, 7, 3, 6, 14, 10, 1, -6, 9]},
        "B": {"diag": [9, 1, 2, 1, 6, 8, 5, 3, 9, 6]},
        "f": [6, 1, 4, 13, 6, 15, 17, 20, 3, 16],
        "c": [19, 14, -9, -9, -8, 17, -22, -14, -8, 18],
    },
    4: {
        "n": 5,
        "alpha": 10.0,
        "A": {"diag": [6, 3, 9, 9, 2]},
        "B": {"diag": [2, 4, 5, 4, 3]},
        "f": [5, 4, 4, 20, 9],
        "c": [1, -9, -6, 3, -5],
    },
    5: {
        "n": 5,
        "alpha": 10.0,
        "A": {"diag": [1, -1, 1, 4, 4]},
        "B": {"diag": [1, 1, 1, 4, 5]},
        "f": [1, -51, -1, -11, -61],
        "c": [3, 0, 1, -2, 0],
    },
    6: {
        "n": 5,
        "alpha": 10.0,
        "A": {"diag": [5, -1, 2, 5, 1]},
        "B": {"diag": [5, 2, 2, 1, 4]},
        "f": [3, -35, -1, 11, 15],
        "c": [7, 0, 4, -6, 10],
    },
    7: {
        "n": 3,
        "alpha": 8.0,
        "A": {"dense": [[4, 0, 1], [0, -4, -6], [1, -6, 4]]},
        "B": {"dense": [[7, -3, -4], [-3, 8, 2], [-4, 2, 10]]},
        "f": [3, 2, 3],
        "c": [10, 6, 7],
    },
    8: {
        "n": 5,
        "alpha": 4.0,
        "A": {
            "dense": [
                [15, 3, -3, -2, -4],
                [3, 21, -5, 0, -2],
                [-3, -5, 12, 0, 2],
                [-2, 0, 0, 14, 3],
                [-4, -2, 2, 3, 6],
            ]
        },
        "B": {
            "dense": [
                [13, 2, -4, 4, -6],
                [2, 6, -4, 1, -2],
                [-4, -4, 6, 0, -3],
                [4, 1, 0, 7, -7],
                [-6, -2, -3, -7, 21],
            ]
        },
        "f": [6, -2, 5, 4, 10],
        "c": [7, -3, 10, -4, -3],
    },
}

TOL_EXACT = 1e-6
TOL_EIG_EXACT = 1e-9
TOL_VEC_EXACT = 1e-8
TOL_REF4 = 1e-3
TOL_VEC3 = 1e-2

# Expected solve() results; each field maps to (value, tolerance).
EXPECTED: dict[int, dict] = {
    1: {
        "sigma0": (-3.5, TOL_EXACT),
        "sigma1": ([7, 12, 6.25, 9, 5], TOL_EXACT),
        "sigma2": ([27, 24, 5.25, 10, 18], TOL_EXACT),
        "value": (-75.875, TOL_EXACT),
        "lambda_min": (5.0, TOL_EIG_EXACT),
        "x": ([-1, -1, 1, 1, -1], TOL_VEC_EXACT),
        "v": [1, 1, 1, 1, 1],
        "gap_max": 1e-8,
        "M": [[7, -1], [12, 3], [-3.75, 6.25], [0, 9], [5, 0]],
        "N": [[27, 19], [24, 15], [-4.75, 5.25], [1, 10], [18, 13]],
        "theorem5": True,
    },
    2: {
        "sigma0": (-2.5, TOL_EXACT),
        "sigma1": ([3.75, 4.75, 6, 6.75, 1.75, 7.75, 5.75, 8.25], TOL_EXACT),
        "sigma2": ([16.75, 1.75, 9, 17.75, 11.75, 23.75, 21.75, 22.25], TOL_EXACT),
        "value": (-102.875, TOL_EXACT),
        "lambda_min": (1.0, TOL_EIG_EXACT),
        "x": ([1, -1, 1, -1, -1, 1, -1, 1], TOL_VEC_EXACT),
        "v": [1] * 8,
        "gap_max": 1e-8,
        "M": [
            [-3.25, 3.75], [4.75, -1.25], [-2, 6], [6.75, 5.75],
            [1.75, -3.25], [-0.25, 7.75], [5.75, -2.25], [1.25, 8.25],
        ],
        "N": [
            [9.75, 16.75], [1.75, -4.25], [1, 9], [17.75, 16.75],
            [11.75, 6.75], [15.75, 23.75], [21.75, 13.75], [15.25, 22.25],
        ],
        "theorem5": True,
    },
    3: {
        "sigma0": (0.0, TOL_EXACT),
        "sigma1": ([8.5, 3, 1, 3, 1, 1.5, 6, 6.5, 7, 4.5], TOL_EXACT),
        "sigma2": ([14.5, 4, 5, 16, 7, 16.5, 23, 26.5, 10, 20.5], TOL_EXACT),
        "value": (-212.0, TOL_EXACT),
        "lambda_min": (8.0, TOL_EIG_EXACT),
        "x": ([1, 1, -1, -1, -1, 1, -1, -1, -1, 1], TOL_VEC_EXACT),
        "v": [1] * 10,
        "gap_max": 1e-8,
        "M": [
            [-10.5, 8.5], [-11, 3], [1, -8], [3, -6], [1, -7],
            [-15.5, 1.5], [6, -16], [6.5, -7.5], [7, -1], [-13.5, 4.5],
        ],
        "N": [
            [-4.5, 14.5], [-10, 4], [5, -4], [16, 7], [7, -1],
            [-0.5, 16.5], [23, 1], [26.5, 12.5], [10, 2], [2.5, 20.5],
        ],
        "theorem5": True,
    },
    4: {
        "sigma0": (-1.82, TOL_VEC3),
        "sigma1": ([0, 6.641, 3.051, 0.641, 4.231], TOL_VEC3),
        "value": (-51.7281, TOL_REF4),
        "lambda_min": (2.3593, TOL_REF4),
        "x": ([0.424, -1, -1, 1, -1], TOL_VEC3),
        "v": [1, 1, 1, 1, 1],
        "M": [[-2.5, -1.5], [5, -4], [1, -5], [-4, -1], [3, -2]],
        "N": [[2.5, 3.5], [9, 0], [5, -1], [16, 19], [12, 7]],
        "theorem5": False,
    },
    # For instances 5 and 6 some c_i = 0, so the matching sigma1 coordinates
    # are flat directions of the dual: the reference multipliers and
    # lambda_min depend on where a solver happens to stop and are not
    # compared.
    5: {
        "value": (32.5, TOL_REF4),
        "x": ([1, 0, 1, -1, 0], TOL_VEC3),
        "v": [1, 0, 1, 1, 0],
    },
    6: {
        "value": (-40.5, TOL_REF4),
        "x": ([1, 0, 1, -1, 1], TOL_VEC3),
        "v": [1, 0, 1, 1, 1],
    },
    7: {
        "sigma0": (-0.5, TOL_EXACT),
        "sigma1": ([2.5, 9.75, 6], TOL_EXACT),
        "value": (-33.875, TOL_EXACT),
        "lambda_min": (1.58694, TOL_REF4),
        "x": ([1, 1, 1], TOL_VEC_EXACT),
        "v": [1, 1, 1],
        "gap_max": 1e-8,
    },
    8: {
        "sigma0": (0.088, TOL_VEC3),
        "sigma1": ([0, 1.994, 0, 0, 0], TOL_VEC3),
        "value": (-32.8777, TOL_REF4),
        "lambda_min": (5.54327, TOL_REF4),
        "x": ([0.556, 0, 0.978, -0.174, -0.225], TOL_VEC3),
        "v": [1, 0, 1, 1, 1],
    },
}

EXAMPLE_IDS = tuple(sorted(PROBLEM_DATA))


def example_instance(k: int) -> ProblemInstance:
    """Build shipped instance k (1..8)."""
    data = PROBLEM_DATA[k]
    a = data["A"].get("diag", data["A"].get("dense"))
    b = data["B"].get("diag", data["B"].get("dense"))
    inst, corrections = ProblemInstance.build(a, b, data["alpha"], data["c"], data["f"])
    if corrections:
        raise AssertionError(f"fixture {k} should be exactly symmetric: {corrections}")
    return inst
