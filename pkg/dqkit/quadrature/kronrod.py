"""
Globally adaptive Gauss-Kronrod (7/15) integration on subintervals of [0, 1].

Each interval carries the 15-point Kronrod value and the difference to the
embedded 7-point Gauss value as its error estimate. The interval with the
largest estimate is bisected until the summed estimate meets the target.
"""
from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple

import numpy as np

from scalars.core import QRootTwo
from scalars.exceptions import EvalError, ModeError, NonConvergence

logger = logging.getLogger(__name__)

# Kronrod abscissae on [-1, 1], positive half; odd indices are the Gauss nodes
KRONROD_NODES = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.000000000000000000000000000000000,
    ]
)
KRONROD_WEIGHTS = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
GAUSS_WEIGHTS = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)

# symmetric layout: -x_0 .. -x_6, 0, x_6 .. x_0
ABSCISSAE = np.concatenate([-KRONROD_NODES[:-1], KRONROD_NODES[::-1]])
WEIGHTS_15 = np.concatenate([KRONROD_WEIGHTS[:-1], KRONROD_WEIGHTS[::-1]])
WEIGHTS_7 = np.zeros(15)
WEIGHTS_7[[1, 3, 5]] = GAUSS_WEIGHTS[:3]
WEIGHTS_7[7] = GAUSS_WEIGHTS[3]
WEIGHTS_7[[9, 11, 13]] = GAUSS_WEIGHTS[2::-1]


@dataclass(frozen=True)
class QuadratureConfig:
    target_abs_error: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.target_abs_error > 0:
            raise ValueError("target_abs_error must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")

    def as_dict(self) -> dict:
        return {
            "target_abs_error": self.target_abs_error,
            "max_subdivisions": self.max_subdivisions,
        }


class QuadratureResult(NamedTuple):
    value: float
    error_estimate: float
    subdivisions: int


class Segment(NamedTuple):
    left: float
    right: float
    value: float
    error: float


def _endpoint(value: object) -> float:
    if isinstance(value, QRootTwo):
        raise ModeError("integration runs in float mode only")
    return float(value)


def gauss_kronrod(g: Callable[[float], float], left: float, right: float) -> Segment:
    center = (left + right) / 2
    half = (right - left) / 2
    values = np.array([float(g(center + half * x)) for x in ABSCISSAE])
    if not np.all(np.isfinite(values)):
        raise EvalError(f"integrand is not finite on [{left!r}, {right!r}]")
    kronrod = half * float(np.dot(WEIGHTS_15, values))
    gauss = half * float(np.dot(WEIGHTS_7, values))
    return Segment(left, right, kronrod, abs(kronrod - gauss))


def _total(segments: Iterable[Segment]) -> float:
    # fixed left-to-right order keeps the sum reproducible
    return math.fsum(s.value for s in sorted(segments, key=lambda s: s.left))


def integrate(
    g: Callable[[float], float],
    a: float,
    b: float,
    cfg: QuadratureConfig = QuadratureConfig(),
) -> QuadratureResult:
    """
    Integral of ``g`` over [a, b].

    Raises NonConvergence, carrying the best estimate, when the error target
    is still missed after ``cfg.max_subdivisions`` bisections.
    """
    a, b = _endpoint(a), _endpoint(b)
    if a > b:
        raise ValueError(f"empty interval [{a!r}, {b!r}]")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)

    first = gauss_kronrod(g, a, b)
    # max-heap on the error estimate, ties broken by the left endpoint
    heap = [(-first.error, first.left, first)]
    total_error = first.error
    subdivisions = 0
    while total_error > cfg.target_abs_error:
        if subdivisions >= cfg.max_subdivisions:
            value = _total(item[2] for item in heap)
            logger.warning(
                "quadrature on [%r, %r] stopped after %d subdivisions, "
                "error estimate %.3g",
                a,
                b,
                subdivisions,
                total_error,
            )
            raise NonConvergence(value, total_error, subdivisions)
        _, _, worst = heapq.heappop(heap)
        middle = (worst.left + worst.right) / 2
        for left, right in ((worst.left, middle), (middle, worst.right)):
            part = gauss_kronrod(g, left, right)
            heapq.heappush(heap, (-part.error, part.left, part))
        subdivisions += 1
        total_error = math.fsum(-item[0] for item in heap)

    value = _total(item[2] for item in heap)
    logger.debug(
        "integrated over [%r, %r] with %d subdivisions, error estimate %.3g",
        a,
        b,
        subdivisions,
        total_error,
    )
    return QuadratureResult(value, total_error, subdivisions)


def integrate_diagonal(
    H: Callable[[float, float], float],
    a: float,
    b: float,
    cfg: QuadratureConfig = QuadratureConfig(),
) -> QuadratureResult:
    """Integral of the diagonal trace s -> H(s, s) over [a, b]."""
    return integrate(lambda s: H(s, s), a, b, cfg)
