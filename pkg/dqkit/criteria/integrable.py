"""
Integrable recognition: (b - a) H(a, b) must equal the integral of the
diagonal trace s -> H(s, s) over [a, b]. Float mode only.
"""
from __future__ import annotations

from typing import NamedTuple

from quadrature.kronrod import QuadratureConfig, integrate_diagonal
from sampling.plans import SamplingPlan, gen_pairs
from scalars.core import Mode, Tolerance
from scalars.exceptions import ModeError

from .algebraic import Bivariate
from .verdicts import CriterionReport, SampleLedger


class IntegrableResidual(NamedTuple):
    residual: float
    quad_error: float
    reference: float


def integrable_residual(
    H: Bivariate, a: float, b: float, cfg: QuadratureConfig = QuadratureConfig()
) -> IntegrableResidual:
    """(b - a) H(a, b) minus the diagonal integral, with the quadrature error."""
    scaled = (b - a) * H(a, b)
    integral = integrate_diagonal(H, a, b, cfg)
    return IntegrableResidual(
        scaled - integral.value,
        integral.error_estimate,
        abs(scaled) + abs(integral.value),
    )


def run_integrable(
    H: Bivariate,
    plan: SamplingPlan,
    tol: Tolerance = Tolerance(),
    cfg: QuadratureConfig = QuadratureConfig(),
) -> CriterionReport:
    if plan.mode is not Mode.FLOAT:
        raise ModeError("the integrable criterion needs a float-mode plan")
    ledger = SampleLedger("integrable", tol, plan.mode)
    loose = 0

    for pair in gen_pairs(plan):

        def check(pair=pair):
            nonlocal loose
            residual, quad_error, reference = integrable_residual(H, *pair, cfg)
            if quad_error > tol.bound(reference):
                loose += 1
                ledger.skip(pair, f"quadrature error estimate {quad_error:.3g} is too large")
                return
            ledger.record(pair, residual, tol.passes(residual, reference))

        ledger.attempt(pair, check)

    notes = [f"{loose} pairs had a quadrature error above the tolerance"] if loose else []
    return ledger.report(notes=notes, details={"quadrature": cfg.as_dict()})
