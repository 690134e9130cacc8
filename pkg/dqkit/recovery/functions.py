"""
Reconstruction of f from a difference quotient H, up to the constant C.

Three constructions, one per criterion family:

    algebraic   f(x) = x H(0, x) + C        (f(0) = C)
    integral    f(x) = int_0^x H(s, s) ds + C
    series      f(x) = sum_p c_p x^(p+1) + C

None of them re-checks that H is a difference quotient.
"""
from __future__ import annotations

import logging
import math
import uuid
import weakref
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, TextIO

from django.core.cache import caches

from criteria.algebraic import Bivariate
from criteria.verdicts import jsonable
from quadrature.kronrod import QuadratureConfig, QuadratureResult, integrate_diagonal
from scalars.core import Mode, Scalar, format_scalar, mode_of, to_mode, zero
from scalars.exceptions import MissingCoefficient, ModeError

from .cache_utils import breakpoint_key

logger = logging.getLogger(__name__)

BREAKPOINTS = 32
TABLE_POINTS = 33


def equispaced(mode: Mode = Mode.FLOAT, n: int = TABLE_POINTS) -> list[Scalar]:
    """``n`` equispaced points of [0, 1], endpoints included."""
    return [to_mode(Fraction(k, n - 1), mode) for k in range(n)]


class RecoveredFunction:
    """A function f on [0, 1] whose difference quotient is the given H."""

    kind: str = ""

    def __init__(self, constant: Scalar):
        self.constant = constant

    def __repr__(self) -> str:
        return f"{type(self).__name__}(C={format_scalar(self.constant)})"

    def __call__(self, x: Scalar) -> Scalar:
        raise NotImplementedError

    def _constant(self, x: Scalar) -> Scalar:
        return to_mode(self.constant, mode_of(x))

    def table(self, points: Iterable[Scalar]) -> list[tuple[Scalar, Scalar]]:
        return [(x, self(x)) for x in points]

    def export(self, stream: TextIO, points: Optional[Iterable[Scalar]] = None) -> None:
        """Writes ``x f(x)`` rows, then a ``C <value>`` line."""
        for x, value in self.table(equispaced() if points is None else points):
            stream.write(f"{format_scalar(x)} {format_scalar(value)}\n")
        stream.write(f"C {format_scalar(self.constant)}\n")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "constant": jsonable(self.constant)}


class AlgebraicRecovery(RecoveredFunction):
    kind = "algebraic"

    def __init__(self, H: Bivariate, constant: Scalar):
        super().__init__(constant)
        self.H = H

    def __call__(self, x: Scalar) -> Scalar:
        if not x:
            return self._constant(x)
        return x * self.H(zero(mode_of(x)), x) + self._constant(x)


def _float_point(x: Scalar) -> float:
    if mode_of(x) is Mode.EXACT:
        raise ModeError("integral recovery runs in float mode only")
    return float(x)


class IntegralRecovery(RecoveredFunction):
    """
    Integral of the diagonal trace from 0, plus C.

    The integrals over [k/32, (k+1)/32] are memoized in the ``recovery``
    cache, so f(x) costs one short integral once the segments below x are
    known. Each segment runs at 1/32 of the configured error target.
    """

    kind = "integral"

    def __init__(
        self,
        H: Bivariate,
        constant: Scalar,
        cfg: QuadratureConfig = QuadratureConfig(),
        cache_alias: str = "recovery",
    ):
        super().__init__(constant)
        self.H = H
        self.cfg = cfg
        self.segment_cfg = QuadratureConfig(
            cfg.target_abs_error / BREAKPOINTS, cfg.max_subdivisions
        )
        self.cache = caches[cache_alias]
        self.token = uuid.uuid4().hex
        self.keys = [breakpoint_key(self.token, index) for index in range(BREAKPOINTS)]
        # orphaned entries go with the instance
        weakref.finalize(self, self.cache.delete_many, self.keys)

    def release(self) -> None:
        """Drops the memoized segments; later calls recompute them."""
        self.cache.delete_many(self.keys)

    def _segment(self, index: int) -> QuadratureResult:
        key = self.keys[index]
        cached = self.cache.get(key)
        if cached is not None:
            return QuadratureResult(*cached)
        result = integrate_diagonal(
            self.H, index / BREAKPOINTS, (index + 1) / BREAKPOINTS, self.segment_cfg
        )
        self.cache.set(key, tuple(result))
        return result

    def integral(self, x: float) -> QuadratureResult:
        """int_0^x H(s, s) ds, with the summed error estimates and subdivisions."""
        x = _float_point(x)
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"recovery is defined on [0, 1], got {x!r}")
        whole = min(math.floor(x * BREAKPOINTS), BREAKPOINTS)
        if whole / BREAKPOINTS > x:
            whole -= 1
        parts = [self._segment(index) for index in range(whole)]
        if whole < BREAKPOINTS:
            parts.append(integrate_diagonal(self.H, whole / BREAKPOINTS, x, self.segment_cfg))
        return QuadratureResult(
            math.fsum(part.value for part in parts),
            math.fsum(part.error_estimate for part in parts),
            sum(part.subdivisions for part in parts),
        )

    def __call__(self, x: float) -> float:
        if _float_point(x) == 0.0:
            return float(self.constant)
        return self.integral(x).value + float(self.constant)

    def as_dict(self) -> dict:
        return {
            **super().as_dict(),
            "quadrature": self.cfg.as_dict(),
            "breakpoints": BREAKPOINTS,
        }


class SeriesRecovery(RecoveredFunction):
    kind = "series"

    def __init__(self, coefficients: Sequence[Scalar], constant: Scalar):
        super().__init__(constant)
        self.coefficients = list(coefficients)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: Scalar) -> Scalar:
        mode = mode_of(x)
        # Horner on sum c_p x^p, then one more factor of x
        total = zero(mode)
        for c in reversed(self.coefficients):
            total = total * x + to_mode(c, mode)
        return total * x + self._constant(x)

    def export(self, stream: TextIO, points: Optional[Iterable[Scalar]] = None) -> None:
        """Writes ``p c_p`` rows, then a ``C <value>`` line."""
        for p, c in enumerate(self.coefficients):
            stream.write(f"{p} {format_scalar(c)}\n")
        stream.write(f"C {format_scalar(self.constant)}\n")

    def as_dict(self) -> dict:
        return {**super().as_dict(), "coefficients": jsonable(self.coefficients)}


def recover_algebraic(H: Bivariate, C: Scalar) -> AlgebraicRecovery:
    return AlgebraicRecovery(H, C)


def recover_integral(
    H: Bivariate, C: Scalar, cfg: QuadratureConfig = QuadratureConfig()
) -> IntegralRecovery:
    return IntegralRecovery(H, C, cfg)


def recover_series(profile: Mapping[int, Scalar], C: Scalar, P: int) -> SeriesRecovery:
    missing = [p for p in range(P + 1) if p not in profile]
    if missing:
        raise MissingCoefficient(f"profile lacks c_p for p = {missing[0]}")
    logger.debug("series recovery of order %d", P)
    return SeriesRecovery([profile[p] for p in range(P + 1)], C)
