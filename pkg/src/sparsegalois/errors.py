"""Exception types shared across the package."""


class SparseGaloisError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(SparseGaloisError):
    """Tuple shape does not fit the operation (e.g. k != n for a square op)."""


class PreconditionViolated(SparseGaloisError):
    pass


class ZeroConstantTerm(SparseGaloisError):
    pass


class DegenerateSystem(SparseGaloisError):
    """Root count differs from the mixed volume after all retries."""


class Unsupported(SparseGaloisError):
    pass


class PathFailure(SparseGaloisError):
    """A tracked path underflowed its step, collided, or blew up."""


class Inconclusive(SparseGaloisError):
    pass


class CapExceeded(SparseGaloisError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or {}


class BoundsTooLarge(SparseGaloisError):
    pass
