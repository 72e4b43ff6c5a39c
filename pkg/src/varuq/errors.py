"""Exception hierarchy shared by all modules."""


class VarUQError(Exception):
    """Base class for every error raised by :mod:`varuq`."""


class SimplexError(VarUQError, ValueError):
    """A vector is not a valid point of the probability simplex."""


class DimensionError(VarUQError, ValueError):
    """Label counts of two inputs do not agree."""


class ConstrainedMaximumError(VarUQError, ValueError):
    """The closed-form maximizer leaves the simplex.

    The unconstrained stationary point has a negative coordinate, so the true
    maximizer lies on the boundary. Use :func:`varuq.oracles.grid_maximize`
    (or :func:`varuq.variance.constrained_maximizer`) instead.
    """


class CannotSpreadError(VarUQError, ValueError):
    """No atom of the mixture lies strictly inside the simplex."""


class InfeasibleShiftError(VarUQError, ValueError):
    """A location shift would move an atom off the simplex."""


class SchemaError(VarUQError, ValueError):
    """A prediction file violates its schema."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DivergenceError(VarUQError, RuntimeError):
    """Gradient descent produced a non-finite loss."""
