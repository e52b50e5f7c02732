"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: data problems exit 2, numerical
failures exit 3; anything argparse rejects exits 1.
"""


class SigpError(Exception):
    """Base class for all package errors."""


class DimensionError(SigpError, ValueError):
    """Inputs have incompatible shapes or violate a symmetry requirement."""


class DomainError(SigpError, ValueError):
    """A parameter lies outside its documented domain."""


class SingularityError(SigpError, ArithmeticError):
    """A matrix that must be invertible or positive definite is not.

    Messages suggest raising the relevant regularization constant when
    one exists (zeta, zeta1).
    """


class RankError(SigpError, ValueError):
    """Requested rank exceeds the numerically detected rank."""

    def __init__(self, message, detected_rank):
        super().__init__(message)
        self.detected_rank = detected_rank


class DataError(SigpError, ValueError):
    """Malformed input data (CSV parse failures carry a line number)."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class NumericalError(SigpError, ArithmeticError):
    """A computation failed numerically at runtime."""
