"""Series parameters, validation, and classification of the characteristic exponent."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import ParameterError
from .specfun import is_near_nonpositive_integer

__all__ = ["SeriesParams", "SpClass", "SpTag", "s_exponent", "classify", "DEFAULT_EPS_INT"]

DEFAULT_EPS_INT = 1e-9


@dataclass(frozen=True)
class SeriesParams:
    """Upper parameters a_1..a_{p+1} and lower parameters b_1..b_p.

    Terminating series (an upper parameter at a non-positive integer) and
    lower parameters sitting on gamma poles are rejected at construction.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]

    def __init__(self, a, b):
        object.__setattr__(self, "a", tuple(float(x) for x in a))
        object.__setattr__(self, "b", tuple(float(x) for x in b))
        self._validate()

    def _validate(self) -> None:
        if len(self.b) < 1:
            raise ParameterError("need at least one lower parameter (p >= 1)")
        if len(self.a) != len(self.b) + 1:
            raise ParameterError(
                f"expected one more upper than lower parameter, got "
                f"{len(self.a)} upper and {len(self.b)} lower"
            )
        for x in self.a + self.b:
            if not math.isfinite(x):
                raise ParameterError(f"non-finite parameter {x!r}")
        for i, x in enumerate(self.a):
            if is_near_nonpositive_integer(x):
                raise ParameterError(
                    f"upper parameter a_{i+1}={x!r} is a non-positive integer "
                    "(terminating series are out of scope)"
                )
        for j, x in enumerate(self.b):
            if is_near_nonpositive_integer(x):
                raise ParameterError(
                    f"lower parameter b_{j+1}={x!r} sits on a gamma pole"
                )

    @property
    def p(self) -> int:
        return len(self.b)

    @property
    def s(self) -> float:
        """Characteristic exponent: sum of lower minus sum of upper parameters."""
        return s_exponent(self)

    @property
    def tail_convergent(self) -> bool:
        """True when the infinite coefficient sums converge (a_j > 0 for j >= 3)."""
        return all(x > 0.0 for x in self.a[2:])

    def tail_decay(self) -> float:
        """Decay exponent delta of the coefficient-sum terms (min a_j, j >= 3)."""
        if self.p == 1:
            return math.inf
        return min(self.a[2:])


def s_exponent(params: SeriesParams) -> float:
    # fsum keeps s exactly rounded, which matters when it is meant to be integral
    return math.fsum(params.b) - math.fsum(params.a)


class SpTag(enum.Enum):
    NONINTEGER = "noninteger"
    ZERO = "zero"
    POSITIVE_INTEGER = "positive-integer"
    NEGATIVE_INTEGER = "negative-integer"


@dataclass(frozen=True)
class SpClass:
    """Classification of the exponent: tag, |integer value| t, and the exact s."""

    tag: SpTag
    t: int
    s: float


def classify(s: float, eps_int: float = DEFAULT_EPS_INT) -> SpClass:
    """Assign exactly one tag to a finite real exponent.

    Values within eps_int of an integer are snapped to the integer-case
    formulas, which are the numerically correct limit there.
    """
    if eps_int <= 0.0:
        raise ValueError("eps_int must be positive")
    r = round(s)
    if abs(s - r) <= eps_int:
        if r == 0:
            return SpClass(SpTag.ZERO, 0, s)
        if r > 0:
            return SpClass(SpTag.POSITIVE_INTEGER, int(r), s)
        return SpClass(SpTag.NEGATIVE_INTEGER, int(-r), s)
    return SpClass(SpTag.NONINTEGER, 0, s)
