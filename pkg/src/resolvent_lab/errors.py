"""Exception types shared across the package.

ValidationError covers bad arguments and violated preconditions (CLI exit 1),
NumericsError covers solver breakdowns discovered at run time (CLI exit 2).
"""


class ResolventLabError(Exception):
    """Base class for all package errors."""


class ValidationError(ResolventLabError):
    """Invalid argument or violated precondition."""


class CapabilityError(ValidationError):
    """Requested operation is outside what the object supports."""


class NumericsError(ResolventLabError):
    """Numerical failure: degenerate factorization, missing bracket, non-convergence."""


class UnresolvedWarning(UserWarning):
    """A computed quantity failed its resolution diagnostic (boundary mass, grid refinement)."""
