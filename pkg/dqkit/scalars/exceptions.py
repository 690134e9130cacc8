"""Exception hierarchy shared by every app of the toolkit."""
from __future__ import annotations


class DQError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class DivisionByZero(DQError, ZeroDivisionError):
    """A zero divisor reached scalar arithmetic (usually a degenerate pair a = b)."""


class ModeError(DQError):
    """An operation mixed float and exact scalars or needs the other mode."""


class ScalarFormatError(DQError, ValueError):
    """Text could not be read as a scalar."""


class ExprSyntaxError(DQError):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"{message} at position {position}")


class ArityError(DQError):
    """An expression used a variable its arity does not declare."""


class NoBranchMatched(DQError):
    """Every guard of a piecewise expression evaluated to false."""


class EvalError(DQError):
    """Evaluation of an expression failed (domain error, overflow, ...)."""


class InsufficientPool(DQError):
    """The exact sampling pool has too few distinct members in [0, 1]."""


class InfeasibleGap(DQError):
    """No sample geometry satisfies the requested minimum gap."""


class NonConvergence(DQError):
    def __init__(self, value: float, error_estimate: float, subdivisions: int):
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions = subdivisions
        super().__init__(
            f"quadrature did not converge after {subdivisions} subdivisions "
            f"(best estimate {value!r}, error estimate {error_estimate!r})"
        )


class DiagonalUndefined(DQError):
    """A difference quotient was evaluated at (a, a) without a derivative."""


class StepTooLarge(DQError):
    """The finite-difference step does not fit the sampled gaps."""


class MissingCoefficient(DQError):
    """A series profile lacks a coefficient c_p it needs."""


class SeriesFormatError(DQError, ValueError):
    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")
