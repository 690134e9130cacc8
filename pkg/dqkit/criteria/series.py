"""
Summation recognition for truncated bivariate power series

    H(a, b) = sum of c_ij a^i b^j over i + j <= P.

H is a difference quotient exactly when every anti-diagonal i + j = p
carries a single value c_p.
"""
from __future__ import annotations

import logging
import math
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Mapping, Optional, TextIO, Union

from scalars.core import (
    Mode,
    Scalar,
    Tolerance,
    format_scalar,
    magnitude,
    mode_of,
    parse_scalar,
    to_mode,
    zero,
)
from scalars.exceptions import ModeError, ScalarFormatError, SeriesFormatError

from .verdicts import CriterionReport, SampleLedger, Verdict

logger = logging.getLogger(__name__)

MIN_PROBE_ORDER = 8

Index = tuple[int, int]


class PowerSeries2D:
    def __init__(
        self,
        order: int,
        coeffs: Mapping[Index, Scalar],
        mode: Optional[Mode] = None,
    ):
        if order < 0:
            raise ValueError(f"truncation order must be nonnegative, got {order}")
        for i, j in coeffs:
            if i < 0 or j < 0:
                raise ValueError(f"negative coefficient index ({i}, {j})")
            if i + j > order:
                raise ValueError(f"coefficient ({i}, {j}) lies beyond order {order}")
        if mode is None:
            values = list(coeffs.values())
            floats = any(mode_of(value) is Mode.FLOAT for value in values)
            mode = Mode.FLOAT if floats or not values else Mode.EXACT
        self.order = order
        self.mode = Mode(mode)
        self.coeffs = {index: to_mode(value, self.mode) for index, value in coeffs.items()}

    def __repr__(self) -> str:
        return (
            f"PowerSeries2D(order={self.order}, terms={len(self.coeffs)}, "
            f"mode={self.mode.value})"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PowerSeries2D):
            return NotImplemented
        mine = (self.order, self.mode, self.coeffs)
        return mine == (other.order, other.mode, other.coeffs)

    def coefficient(self, i: int, j: int) -> Scalar:
        return self.coeffs.get((i, j), zero(self.mode))

    def antidiagonal(self, p: int) -> list[tuple[Index, Scalar]]:
        """Entries with i + j = p, from (p, 0) down to (0, p); absent ones are zero."""
        return [((i, p - i), self.coefficient(i, p - i)) for i in range(p, -1, -1)]

    def __call__(self, a: Scalar, b: Scalar) -> Scalar:
        mode = mode_of(a)
        if mode is not mode_of(b):
            raise ModeError("arguments mix float and exact scalars")
        if mode is Mode.EXACT and self.mode is Mode.FLOAT:
            raise ModeError("a float series cannot be evaluated at exact points")
        terms = [
            to_mode(c, mode) * a**i * b**j for (i, j), c in sorted(self.coeffs.items())
        ]
        if mode is Mode.FLOAT:
            return math.fsum(terms)
        return sum(terms, zero(mode))

    @classmethod
    def from_function(
        cls, fn: Callable[[int, int], Scalar], order: int, mode: Optional[Mode] = None
    ) -> PowerSeries2D:
        coeffs = {(i, p - i): fn(i, p - i) for p in range(order + 1) for i in range(p + 1)}
        return cls(order, coeffs, mode)

    @classmethod
    def from_polynomial_dq(
        cls, coefficients: Iterable[Scalar], mode: Optional[Mode] = None
    ) -> PowerSeries2D:
        """Series of the difference quotient of sum a_k x^k: c_ij = a_{i+j+1}."""
        a = list(coefficients)
        order = max(len(a) - 2, 0)
        coeffs = {
            (i, p - i): a[p + 1]
            for p in range(len(a) - 1)
            for i in range(p + 1)
        }
        return cls(order, coeffs, mode)


def read_series(lines: Iterable[str], mode: Mode) -> PowerSeries2D:
    """
    Series from ``i j value`` records, one per line.

    Blank lines and ``#`` comments are skipped, missing records are zero and
    the truncation order is the largest i + j present.
    """
    coeffs: dict[Index, Scalar] = {}
    for line_number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        fields = text.split()
        if len(fields) != 3:
            raise SeriesFormatError(line_number, f"expected 'i j value', got {text!r}")
        try:
            i, j = int(fields[0]), int(fields[1])
        except ValueError:
            raise SeriesFormatError(line_number, "indices must be integers") from None
        if i < 0 or j < 0:
            raise SeriesFormatError(line_number, "indices must be nonnegative")
        if (i, j) in coeffs:
            raise SeriesFormatError(line_number, f"duplicate coefficient ({i}, {j})")
        try:
            coeffs[(i, j)] = parse_scalar(fields[2], mode)
        except ScalarFormatError as exc:
            raise SeriesFormatError(line_number, str(exc)) from None
    order = max((i + j for i, j in coeffs), default=0)
    return PowerSeries2D(order, coeffs, mode)


def load_series(path: Union[str, Path], mode: Mode) -> PowerSeries2D:
    with open(path, encoding="utf-8") as handle:
        return read_series(handle, mode)


def write_series(series: PowerSeries2D, stream: TextIO) -> None:
    # by anti-diagonal, each from (p, 0) down to (0, p)
    for (i, j) in sorted(series.coeffs, key=lambda index: (sum(index), -index[0])):
        value = series.coeffs[(i, j)]
        stream.write(f"{i} {j} {format_scalar(value)}\n")


class ConvergenceProbe(str, Enum):
    PLAUSIBLE = "plausible"
    IMPLAUSIBLE = "implausible"
    UNKNOWN = "unknown"


def _scan(series: PowerSeries2D, tol: Tolerance):
    """Per anti-diagonal: (p, mean, largest gap, first offending pair or None)."""
    for p in range(series.order + 1):
        entries = series.antidiagonal(p)
        values = [value for _, value in entries]
        if series.mode is Mode.FLOAT:
            mean = math.fsum(values) / len(values)
        else:
            mean = sum(values, zero(Mode.EXACT)) / len(values)
        gap, offending = zero(series.mode), None
        for (first, x), (second, y) in combinations(entries, 2):
            difference = abs(x - y)
            if difference > gap:
                gap = difference
            reference = max(magnitude(x), magnitude(y))
            if offending is None and not tol.passes(x - y, reference):
                offending = (first, second)
        yield p, mean, gap, offending


def summation_check(
    series: PowerSeries2D, tol: Tolerance = Tolerance()
) -> tuple[Verdict, dict[int, Scalar]]:
    """Verdict and the profile p -> c_p (the anti-diagonal mean in float mode)."""
    profile = {}
    verdict = Verdict.ACCEPT
    for p, mean, _, offending in _scan(series, tol):
        profile[p] = mean
        if offending is not None:
            verdict = Verdict.REJECT
    return verdict, profile


def absolute_convergence_probe(series: PowerSeries2D) -> ConvergenceProbe:
    """
    Ratio heuristic on the anti-diagonal absolute sums S_p.

    Needs order >= 8. Looks at consecutive nonzero sums in the upper half of
    the range; plausible when their ratios average below 1 and the last one
    is below 1.
    """
    if series.order < MIN_PROBE_ORDER:
        return ConvergenceProbe.UNKNOWN
    sums = [
        math.fsum(magnitude(value) for _, value in series.antidiagonal(p))
        for p in range(series.order + 1)
    ]
    tail = [s for s in sums[series.order // 2 :] if s > 0]
    if len(tail) < 2:
        return ConvergenceProbe.PLAUSIBLE
    ratios = [later / earlier for earlier, later in zip(tail, tail[1:])]
    if math.fsum(ratios) / len(ratios) < 1 and ratios[-1] < 1:
        return ConvergenceProbe.PLAUSIBLE
    return ConvergenceProbe.IMPLAUSIBLE


def run_summation(series: PowerSeries2D, tol: Tolerance = Tolerance()) -> CriterionReport:
    ledger = SampleLedger("summation", tol, series.mode)
    profile = {}
    for p, mean, gap, offending in _scan(series, tol):
        profile[p] = mean
        if offending is None:
            ledger.record((p,), gap, True)
        else:
            ledger.record((p,) + offending, gap, False)
    probe = absolute_convergence_probe(series)
    notes = [f"absolute convergence on the closed triangle: {probe.value}"]
    if probe is ConvergenceProbe.IMPLAUSIBLE:
        logger.warning("series coefficients do not look absolutely summable")
    return ledger.report(
        notes=notes,
        details={"order": series.order, "profile": profile, "convergence": probe},
    )
