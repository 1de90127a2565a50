"""Exception hierarchy.

Input/validation problems and numerical failures are kept distinct so the
CLI can map them onto different exit codes.
"""


class LsnError(Exception):
    """Base class for all lsnfit errors."""


class InputError(LsnError):
    """Invalid user input (bad shapes, bad parameter values, bad files)."""


class DimensionMismatch(InputError):
    """Vector/matrix sizes are inconsistent with the declared component count."""


class InvalidSigma(InputError):
    """A per-component standard deviation is not strictly positive."""


class DomainError(InputError):
    """A scalar argument lies outside the mathematical domain of the operation."""


class NumericalError(LsnError):
    """Numerical failure while computing (distinct from bad input)."""


class NonPositiveDefinite(NumericalError):
    """A covariance/correlation matrix is not (strictly) positive definite."""


class SingularMatrix(NumericalError):
    """Matrix inversion failed."""


class EmptyReducedSet(NumericalError):
    """Every precision row sum vanished; the reduced system is empty."""


class NoRoot(NumericalError):
    """The shape equation has no root at or above zero for the given target."""


class NonConvergence(NumericalError):
    """An iterative solver exhausted its iteration budget."""


class MomentOverflow(NumericalError):
    """A moment expression overflows double precision; reports the offending term."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
