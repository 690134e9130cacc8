"""Forward constructions: the difference quotient of a known f."""
from __future__ import annotations

from typing import Callable, Optional, Sequence

from numpy.polynomial import Polynomial

from quadrature.kronrod import QuadratureConfig, integrate
from scalars.core import Mode, Scalar, mode_of, scalar_div, to_mode, zero
from scalars.exceptions import DiagonalUndefined, ModeError

Univariate = Callable[[Scalar], Scalar]


class DQView:
    """
    H(a, b) = (f(b) - f(a)) / (b - a), extended symmetrically.

    On the diagonal H(a, a) is f'(a), available only when f' was supplied.
    """

    def __init__(self, f: Univariate, fprime: Optional[Univariate] = None):
        self.f = f
        self.fprime = fprime

    def __repr__(self) -> str:
        return f"DQView({self.f!r}, fprime={self.fprime!r})"

    def __call__(self, a: Scalar, b: Scalar) -> Scalar:
        if mode_of(a) is not mode_of(b):
            raise ModeError("arguments mix float and exact scalars")
        if a == b:
            if self.fprime is None:
                raise DiagonalUndefined(f"DQ_f({a!r}, {a!r}) needs the derivative of f")
            return self.fprime(a)
        if b < a:
            a, b = b, a
        return scalar_div(self.f(b) - self.f(a), b - a)


def dq_of(f: Univariate, fprime: Optional[Univariate] = None) -> DQView:
    return DQView(f, fprime)


class PolynomialFunction:
    """sum a_k x^k; numpy evaluates doubles, exact points go through Horner."""

    def __init__(self, coefficients: Sequence[Scalar]):
        self.coefficients = tuple(coefficients) or (0,)
        self.polynomial = Polynomial([float(c) for c in self.coefficients])

    def __repr__(self) -> str:
        return f"PolynomialFunction({list(self.coefficients)!r})"

    def __call__(self, x: Scalar) -> Scalar:
        mode = mode_of(x)
        if mode is Mode.FLOAT:
            return float(self.polynomial(x))
        total = zero(mode)
        for c in reversed(self.coefficients):
            total = total * x + to_mode(c, mode)
        return total

    def deriv(self) -> PolynomialFunction:
        return PolynomialFunction([k * c for k, c in enumerate(self.coefficients)][1:])


def polynomial_dq(coefficients: Sequence[Scalar]) -> DQView:
    f = PolynomialFunction(coefficients)
    return DQView(f, f.deriv())


class AverageValue:
    """
    Average of g over [a, b], computed by quadrature; g(a) on the diagonal.
    Float mode only.
    """

    def __init__(self, g: Univariate, cfg: QuadratureConfig = QuadratureConfig()):
        self.g = g
        self.cfg = cfg

    def __repr__(self) -> str:
        return f"AverageValue({self.g!r})"

    def __call__(self, a: float, b: float) -> float:
        if a == b:
            return float(self.g(a))
        if b < a:
            a, b = b, a
        return integrate(self.g, a, b, self.cfg).value / (b - a)


def average_of(g: Univariate, cfg: QuadratureConfig = QuadratureConfig()) -> AverageValue:
    return AverageValue(g, cfg)
