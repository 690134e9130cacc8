"""
Scalar arithmetic in the two evaluation modes of the toolkit.

Float mode uses plain IEEE-754 doubles. Exact mode uses ``QRootTwo``, the
elements q + r*sqrt(2) of the field Q(sqrt 2) with arbitrary-precision
rational parts; it is the smallest field in which irrational sample points
are exactly representable, so rationality of a sample can be decided.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Union

from .exceptions import DivisionByZero, ModeError, ScalarFormatError

SQRT2_TOKEN = "sqrt2"


class Mode(str, Enum):
    FLOAT = "float"
    EXACT = "exact"


@total_ordering
class QRootTwo:
    """Immutable element q + r*sqrt(2) of Q(sqrt 2)."""

    __slots__ = ("_q", "_r")

    def __init__(self, q: numbers.Rational = 0, r: numbers.Rational = 0) -> None:
        if isinstance(q, float) or isinstance(r, float):
            raise ModeError("exact scalars cannot be built from floats")
        # Fraction keeps lowest terms with a positive denominator
        self._q = Fraction(q)
        self._r = Fraction(r)

    @property
    def rat_part(self) -> Fraction:
        return self._q

    @property
    def surd_part(self) -> Fraction:
        return self._r

    @classmethod
    def sqrt2(cls) -> QRootTwo:
        return cls(0, 1)

    @classmethod
    def _coerce(cls, other: object) -> QRootTwo:
        if isinstance(other, QRootTwo):
            return other
        if isinstance(other, float):
            raise ModeError(f"cannot mix exact scalar with float {other!r}")
        if isinstance(other, numbers.Rational):
            return cls(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"QRootTwo({self._q}, {self._r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __float__(self) -> float:
        return float(self._q) + float(self._r) * math.sqrt(2.0)

    def __bool__(self) -> bool:
        return bool(self._q) or bool(self._r)

    def __hash__(self) -> int:
        if not self._r:
            return hash(self._q)
        return hash((self._q, self._r))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, float):
            return False
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._q == other._q and self._r == other._r

    def __lt__(self, other: object) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def sign(self) -> int:
        """Exact sign of q + r*sqrt(2)."""
        q_sign = (self._q > 0) - (self._q < 0)
        r_sign = (self._r > 0) - (self._r < 0)
        if r_sign == 0 or q_sign == r_sign:
            return q_sign or r_sign
        if q_sign == 0:
            return r_sign
        # opposite signs: the larger of q^2 and 2 r^2 decides
        if self._q * self._q > 2 * self._r * self._r:
            return q_sign
        return r_sign

    def __neg__(self) -> QRootTwo:
        return QRootTwo(-self._q, -self._r)

    def __pos__(self) -> QRootTwo:
        return self

    def __abs__(self) -> QRootTwo:
        return -self if self.sign() < 0 else self

    def __add__(self, other: object) -> QRootTwo:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QRootTwo(self._q + other._q, self._r + other._r)

    def __radd__(self, other: object) -> QRootTwo:
        return self + other

    def __sub__(self, other: object) -> QRootTwo:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QRootTwo(self._q - other._q, self._r - other._r)

    def __rsub__(self, other: object) -> QRootTwo:
        return (-self) + other

    def __mul__(self, other: object) -> QRootTwo:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QRootTwo(
            self._q * other._q + 2 * self._r * other._r,
            self._q * other._r + self._r * other._q,
        )

    def __rmul__(self, other: object) -> QRootTwo:
        return self * other

    def norm(self) -> Fraction:
        return self._q * self._q - 2 * self._r * self._r

    def conjugate(self) -> QRootTwo:
        return QRootTwo(self._q, -self._r)

    def inverse(self) -> QRootTwo:
        if not self:
            raise DivisionByZero("inverse of exact zero")
        norm = self.norm()
        # sqrt(2) is irrational, so a nonzero element has nonzero norm
        assert norm != 0, "nonzero element of Q(sqrt 2) with zero norm"
        return QRootTwo(self._q / norm, -self._r / norm)

    def __truediv__(self, other: object) -> QRootTwo:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> QRootTwo:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> QRootTwo:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** -exponent
        result = QRootTwo(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


Scalar = Union[float, QRootTwo]


def mode_of(value: object) -> Mode:
    if isinstance(value, QRootTwo):
        return Mode.EXACT
    if isinstance(value, float):
        return Mode.FLOAT
    if isinstance(value, numbers.Rational):
        return Mode.EXACT
    if isinstance(value, numbers.Real):
        return Mode.FLOAT
    raise ModeError(f"not a scalar: {value!r}")


def to_mode(value: object, mode: Mode) -> Scalar:
    """Bring ``value`` into ``mode`` without changing it (floats never become exact)."""
    if mode is Mode.FLOAT:
        if isinstance(value, (QRootTwo, numbers.Real)):
            return float(value)
        raise ModeError(f"not a scalar: {value!r}")
    if isinstance(value, QRootTwo):
        return value
    if isinstance(value, numbers.Rational):
        return QRootTwo(value)
    raise ModeError(f"{value!r} has no exact representation in exact mode")


def zero(mode: Mode) -> Scalar:
    return QRootTwo(0) if mode is Mode.EXACT else 0.0


def one(mode: Mode) -> Scalar:
    return QRootTwo(1) if mode is Mode.EXACT else 1.0


def magnitude(value: Scalar) -> float:
    """Absolute value as a double, for reporting and tolerance references."""
    return abs(float(value))


def scalar_div(n: Scalar, d: Scalar) -> Scalar:
    n_mode, d_mode = mode_of(n), mode_of(d)
    if n_mode is not d_mode:
        raise ModeError(f"cannot divide {n_mode.value} by {d_mode.value} scalar")
    if not d:
        raise DivisionByZero("division by zero (degenerate pair a = b?)")
    if n_mode is Mode.EXACT:
        return to_mode(n, Mode.EXACT) / to_mode(d, Mode.EXACT)
    return n / d


def is_rational(s: Scalar) -> bool:
    if not isinstance(s, QRootTwo):
        raise ModeError("rationality is undecidable for doubles; use exact mode")
    return s.surd_part == 0


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def format_scalar(value: Scalar) -> str:
    """Text form: ``p/q`` or ``p/q+r/s*sqrt2`` for exact scalars, repr for floats."""
    if isinstance(value, QRootTwo):
        text = _fraction_text(value.rat_part)
        if value.surd_part:
            sign = "-" if value.surd_part < 0 else "+"
            text += f"{sign}{_fraction_text(abs(value.surd_part))}*{SQRT2_TOKEN}"
        return text
    return repr(float(value))


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarFormatError(f"invalid rational {text!r}") from exc


def _parse_exact(text: str) -> QRootTwo:
    if not text.endswith(SQRT2_TOKEN):
        return QRootTwo(_parse_fraction(text))
    head = text[: -len(SQRT2_TOKEN)].rstrip("*")
    split = max(head.rfind("+"), head.rfind("-"))
    if split > 0:
        rat_text, surd_text = head[:split], head[split:]
    else:
        rat_text, surd_text = "0", head
    if surd_text in ("", "+"):
        surd = Fraction(1)
    elif surd_text == "-":
        surd = Fraction(-1)
    else:
        surd = _parse_fraction(surd_text)
    return QRootTwo(_parse_fraction(rat_text), surd)


def parse_scalar(text: str, mode: Mode) -> Scalar:
    text = text.strip().replace(" ", "")
    if not text:
        raise ScalarFormatError("empty scalar")
    if mode is Mode.EXACT:
        return _parse_exact(text)
    if SQRT2_TOKEN in text:
        return float(_parse_exact(text))
    try:
        return float(text)
    except ValueError:
        return float(_parse_fraction(text))


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")

    def bound(self, reference: Scalar = 0.0) -> float:
        return self.abs_tol + self.rel_tol * magnitude(reference)

    def passes(self, residual: Scalar, reference: Scalar = 0.0) -> bool:
        """Exact residuals must vanish; float residuals must stay within the bound."""
        if isinstance(residual, QRootTwo):
            return not residual
        return abs(residual) <= self.bound(reference)

    def as_dict(self) -> dict:
        return {"abs_tol": self.abs_tol, "rel_tol": self.rel_tol}
