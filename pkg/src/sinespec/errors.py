"""Exception types shared across the package."""

__all__ = ["PreconditionError", "NumericError", "CoefficientFileError"]


class PreconditionError(ValueError):
    """A mathematical hypothesis required by an identity is violated.

    Raised when an operation is asked to run outside the class of
    coefficients for which its defining identity holds (non-zero mean,
    missing periodicity, non-constant coefficient, untrusted eigenvalue
    index, ...).  The CLI maps this to exit status 2.
    """


class NumericError(ArithmeticError):
    """An iterative numeric routine failed to converge or met bad data."""


class CoefficientFileError(ValueError):
    """A coefficient JSON file is malformed; message carries diagnostics."""
