"""Exception hierarchy shared by every module."""


class LatticeError(Exception):
    """Base class for toolkit errors."""


class DomainError(LatticeError, ValueError):
    """An input violates the precondition of an operation."""


class CapacityError(LatticeError):
    """A configured search cap would be exceeded.

    ``cap`` names the option to raise and ``attempted`` the value that was needed.
    """

    def __init__(self, message, cap=None, attempted=None):
        super().__init__(message)
        self.cap = cap
        self.attempted = attempted


class CertificateError(LatticeError):
    """A certificate failed validation; ``index`` names the failing item when known."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InternalError(LatticeError, RuntimeError):
    """A constructive step failed where the mathematics guarantees success."""


class OnWallError(DomainError):
    """A reference class that must lie inside a chamber sits on a wall."""
