"""quartdual: global minimization of fixed-charge quartic objectives.

Minimizes 1/2 x'Ax - c'x + 1/2 (1/2 x'Bx - alpha)^2 - f'v over the
fixed-charge box -v <= x <= v, v binary, by maximizing a concave dual over a
positive-definite cone and recovering a certified primal minimizer.
"""
from .decoupled import (
    DecoupledCandidates,
    decoupled_candidates,
    enumerate_critical_points,
    theorem5_solve,
)
from .dualcore import (
    DualDerivatives,
    DualPoint,
    ReducedDualPoint,
    build_G,
    dual_derivatives,
    dual_value,
    in_S_plus,
    in_S_reduced,
    positive_part_selector,
    recover_primal,
    reduced_dual_derivatives,
    reduced_dual_value,
    sigma2_star,
)
from .errors import (
    DimensionMismatch,
    NoInteriorPoint,
    NonPositiveSigma2,
    NotDiagonal,
    NotInColumnSpace,
    ProblemFileError,
    QuartDualError,
    SingularG,
    TieAtZero,
    TooLarge,
    ZeroC,
)
from .instance import (
    PrimalPoint,
    ProblemInstance,
    check_binary_feasible,
    check_relaxed_feasible,
    evaluate_primal,
    validate_instance,
)
from .matkernel import (
    EigenSummary,
    SymmetricMatrix,
    cholesky_pd_check,
    eigen_summary,
    pseudo_solve,
)
from .oracle import OracleConfig, brute_force_solve, minimize_over_box, primal_gradient_x
from .probfile import instance_digest, load_problem, parse_problem_text
from .solver import (
    KKTReport,
    SolveReport,
    SolverConfig,
    UniquenessFlags,
    solve,
    uniqueness_flags,
    verify_kkt,
)

__version__ = "0.1.0"

__all__ = [
    "DecoupledCandidates",
    "DimensionMismatch",
    "DualDerivatives",
    "DualPoint",
    "EigenSummary",
    "KKTReport",
    "NoInteriorPoint",
    "NonPositiveSigma2",
    "NotDiagonal",
    "NotInColumnSpace",
    "OracleConfig",
    "PrimalPoint",
    "ProblemFileError",
    "ProblemInstance",
    "QuartDualError",
    "ReducedDualPoint",
    "SingularG",
    "SolveReport",
    "SolverConfig",
    "SymmetricMatrix",
    "TieAtZero",
    "TooLarge",
    "UniquenessFlags",
    "ZeroC",
    "brute_force_solve",
    "build_G",
    "check_binary_feasible",
    "check_relaxed_feasible",
    "cholesky_pd_check",
    "decoupled_candidates",
    "dual_derivatives",
    "dual_value",
    "eigen_summary",
    "enumerate_critical_points",
    "evaluate_primal",
    "in_S_plus",
    "in_S_reduced",
    "instance_digest",
    "load_problem",
    "minimize_over_box",
    "parse_problem_text",
    "positive_part_selector",
    "primal_gradient_x",
    "pseudo_solve",
    "recover_primal",
    "reduced_dual_derivatives",
    "reduced_dual_value",
    "sigma2_star",
    "solve",
    "theorem5_solve",
    "uniqueness_flags",
    "validate_instance",
    "verify_kkt",
]
