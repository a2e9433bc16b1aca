"""Exception types shared across the package."""


class CoarseKitError(Exception):
    """Base class for every error raised by coarsekit."""


class InvalidSpace(CoarseKitError):
    """A family of sets violates the axioms required of it."""


class CarrierMismatch(CoarseKitError):
    """Operands live on different carriers or incompatible point sets."""


class PreconditionError(CoarseKitError):
    """A documented precondition failed.

    Raised so that callers can tell "the question was malformed" apart from
    a negative verdict returned as ``False``.
    """


class BudgetExceeded(CoarseKitError):
    """An enumeration or search went past its configured budget."""
