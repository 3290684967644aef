"""Exception types shared across the package."""


class QuartDualError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QuartDualError):
    """Vector or matrix dimensions do not match the instance dimension."""


class NotInColumnSpace(QuartDualError):
    """Right-hand side c is not in the column space of G."""


class NonPositiveSigma2(QuartDualError):
    """Some component of sigma2 is not strictly positive."""


class SingularG(QuartDualError):
    """G(sigma0, sigma1) is singular or not positive definite where required."""


class TieAtZero(QuartDualError):
    """Some f_i + (sigma1)_i sits exactly on the kink; the selector is undefined."""


class NotDiagonal(QuartDualError):
    """Operation requires diagonal A and B."""


class ZeroC(QuartDualError):
    """Operation requires every c_i to be nonzero."""


class TooLarge(QuartDualError):
    """Instance dimension exceeds the enumeration or oracle cap."""


class NoInteriorPoint(QuartDualError):
    """Initialization could not find a strictly feasible dual point."""


class ProblemFileError(QuartDualError):
    """Problem file failed to parse or validate."""
