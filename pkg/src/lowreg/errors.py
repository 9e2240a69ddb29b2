"""Exception types raised across the package."""


class LowRegError(Exception):
    """Base class for every error raised by :mod:`lowreg`."""


class InterfaceOutsideDomain(LowRegError):
    """The level function does not change sign over the interior nodes."""


class EvalAtSingularCenter(LowRegError, ValueError):
    """A singular mode was evaluated exactly at its singular center."""


class ModeDomainError(LowRegError, ValueError):
    """A mode was evaluated outside the set where it is defined."""


class ModeNotSmoothAcrossInterface(LowRegError):
    """A subtracted mode is not smooth at a node used by an interface correction."""


class BoundaryInsideOmega1(LowRegError):
    """A Dirichlet node reached by an inner row cannot carry the mode jump."""


class SingularVandermonde(LowRegError, ValueError):
    """Stencil offsets are repeated, so no finite-difference weights exist."""


class SingularMatrix(LowRegError):
    """A sparse factorization met a zero pivot."""


class RankDeficient(LowRegError):
    """A least-squares matrix does not have full column rank."""


class DimensionMismatch(LowRegError, ValueError):
    """Vector lengths do not match the block partition."""


class UnknownCase(LowRegError, KeyError):
    """No built-in case exists under the requested identifier."""


class NonpositiveError(LowRegError, ValueError):
    """A convergence rate was requested from a non-positive error."""


class IoFailure(LowRegError, OSError):
    """A report or field file could not be written."""


class NonFiniteResult(LowRegError, FloatingPointError):
    """A convergence report row contains a NaN or infinity."""
