"""
Built-in subjects and the pinned demo runs built on them.

dirichlet  difference quotient of the Dirichlet function, exact mode
avg-exp    average value of e^(x^2), its own quadrature at 1e-12
xexp       series c_ij = 1/(i+j)! truncated at order 20, the DQ of x e^x
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, NamedTuple, Optional

from criteria.algebraic import Bivariate
from criteria.series import PowerSeries2D
from expressions.catalog import DIRICHLET_POOL, DIRICHLET_SOURCE
from expressions.evaluator import Expression
from expressions.nodes import Arity
from quadrature.kronrod import QuadratureConfig
from scalars.core import Mode
from verification.quotients import average_of

from .manifest import RunManifest

AVERAGE_TARGET = 1e-12
XEXP_ORDER = 20


class Subject(NamedTuple):
    """The H under test; ``series`` is set when H is a coefficient array."""

    H: Bivariate
    series: Optional[PowerSeries2D] = None


def dirichlet(manifest: RunManifest) -> Subject:
    return Subject(Expression(DIRICHLET_SOURCE))


def average_exp_square(manifest: RunManifest) -> Subject:
    g = Expression("exp(x^2)", Arity.UNIVARIATE)
    cfg = QuadratureConfig(AVERAGE_TARGET, manifest.max_subdivisions)
    return Subject(average_of(g, cfg))


def xexp(manifest: RunManifest) -> Subject:
    if manifest.scalar_mode is Mode.EXACT:
        series = PowerSeries2D.from_function(
            lambda i, j: Fraction(1, math.factorial(i + j)), XEXP_ORDER
        )
    else:
        series = PowerSeries2D.from_function(
            lambda i, j: 1 / math.factorial(i + j), XEXP_ORDER
        )
    return Subject(series, series)


BUILTINS: dict[str, Callable[[RunManifest], Subject]] = {
    "dirichlet": dirichlet,
    "avg-exp": average_exp_square,
    "xexp": xexp,
}

# Demo runs ignore the environment's DQ_* settings.
PINNED = {
    "seed": 42,
    "count": 64,
    "min_gap": 1e-3,
    "abs_tol": 1e-9,
    "rel_tol": 1e-9,
    "quad_tol": 1e-10,
    "max_subdivisions": 200,
    "fd_step": 1e-4,
    "constant": "0",
}

DEMOS = {
    "dirichlet": {
        "criterion": "algebraic",
        "variant": "anchored",
        "mode": "exact",
        "pool": list(DIRICHLET_POOL),
        "constant": "1",
    },
    "avg-exp": {
        "criterion": "integrable",
        "count": 100,
    },
    "xexp": {
        "criterion": "summation",
        "min_gap": 0.05,
        "abs_tol": 1e-12,
        "rel_tol": 1e-12,
    },
}


def demo_manifest(name: str) -> RunManifest:
    if name not in DEMOS:
        raise ValueError(f"unknown demo {name!r}, expected one of {', '.join(DEMOS)}")
    return RunManifest(command="demo", builtin=name, **{**PINNED, **DEMOS[name]})
