"""Exception hierarchy for hypsum."""


class HypsumError(Exception):
    """Base class for all hypsum-specific errors."""


class ParameterError(HypsumError, ValueError):
    """Invalid series parameters (wrong shapes, gamma poles in the term ratio)."""


class PoleError(HypsumError, ArithmeticError):
    """A gamma-type function was evaluated at (or within tolerance of) a pole."""


class DomainError(HypsumError, ValueError):
    """An argument is outside the operation's domain (e.g. m too small)."""


class ConvergenceError(HypsumError, ArithmeticError):
    """An infinite sum does not converge for these parameters (some a_j <= 0, j >= 3)."""


class TailError(HypsumError, ArithmeticError):
    """A series tail could not be resolved to the requested tolerance."""


class DegenerateRepresentationError(HypsumError, ArithmeticError):
    """A closed-form coefficient representation hit a vanishing denominator.

    The nested table remains the authoritative value in this situation.
    """


class DegenerateFitError(HypsumError, ArithmeticError):
    """An order fit is meaningless because a residual difference is exactly zero."""
