"""Exception classes shared across the library.

Plain ``Exception`` subclasses (not ``ValueError``) so that callers can
distinguish nsolab failures from built-in errors.
"""


class NsolabError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NsolabError):
    """Raised when an argument is outside its documented domain."""


class DegenerateCouplingError(ValidationError):
    """Raised when an operation needs Im(c) != 0 but the coupling is real.

    The decomposition z = t1 + c*t2 over real (t1, t2) is unique only for
    non-real c.
    """


class OverflowGuardError(NsolabError):
    """Raised when a log-magnitude leaves the representable double range."""


class SingularPointError(NsolabError):
    """Raised when a shift z is numerically an eigenvalue of the truncation."""


class UnreliableTruncationError(NsolabError):
    """Raised when a quantity fails the (N, 2N) truncation agreement test."""


class InvalidKernelError(NsolabError):
    """Raised when a heat-kernel consumer receives coefficients flagged invalid."""


class QuadratureError(NsolabError):
    """Raised when adaptive quadrature cannot reach the requested tolerance."""


class ContourError(NsolabError):
    """Raised when a projector contour passes too close to an eigenvalue."""


class RootFindError(NsolabError):
    """Raised when the scan-curve parameter solve fails to bracket or converge."""


class ConvergenceError(NsolabError):
    """Raised when a dense eigenvalue or SVD routine does not converge."""
