"""Exception types shared across the package."""


class CVTeleError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(CVTeleError, ValueError):
    """Array shapes or mode indices are inconsistent."""


class PhysicalityError(CVTeleError, ValueError):
    """A covariance matrix or channel violates the uncertainty relation."""


class DomainError(CVTeleError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BoundaryError(DomainError):
    """A parameter sits at (or beyond) an endpoint where a quantity diverges.

    Carries the offending endpoint so callers can report which limit was hit.
    """

    def __init__(self, message, *, endpoint=None, tau=None, r=None):
        super().__init__(message)
        self.endpoint = endpoint
        self.tau = tau
        self.r = r


class QuadratureError(CVTeleError, RuntimeError):
    """Numerical integration did not reach the requested accuracy."""

    def __init__(self, message, *, achieved=None):
        super().__init__(message)
        self.achieved = achieved
