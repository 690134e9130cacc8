"""
Checks that close the loop between H and a function f.

``roundtrip_check`` compares H with the difference quotient of f on sampled
pairs. ``partials_identity_check`` tests that the two first partials of DQ_f
add up to DQ_f' off the diagonal.
"""
from __future__ import annotations

import logging

from criteria.algebraic import Bivariate
from criteria.verdicts import CriterionReport, SampleLedger
from sampling.plans import SamplingPlan, gen_pairs
from scalars.core import Mode, Tolerance, magnitude
from scalars.exceptions import ModeError, StepTooLarge

from .quotients import DQView, Univariate

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
# finite-difference allowance is FD_ALLOWANCE * h^2 * (1 + |DQ_f'|)
FD_ALLOWANCE = 100.0


def roundtrip_check(
    H: Bivariate, f: Univariate, plan: SamplingPlan, tol: Tolerance = Tolerance()
) -> CriterionReport:
    """Accepts when DQ_f(a, b) matches H(a, b) on every sampled pair."""
    ledger = SampleLedger("roundtrip", tol, plan.mode)
    quotient = DQView(f)

    for pair in gen_pairs(plan):

        def check(pair=pair):
            expected = H(*pair)
            actual = quotient(*pair)
            residual = actual - expected
            reference = magnitude(expected) + magnitude(actual)
            ledger.record(pair, residual, tol.passes(residual, reference))

        ledger.attempt(pair, check)
    return ledger.report()


def partials_identity_check(
    f: Univariate,
    fprime: Univariate,
    plan: SamplingPlan,
    h: float = DEFAULT_STEP,
    tol: Tolerance = Tolerance(),
) -> CriterionReport:
    """
    Compares (DQ_f(a+h, b+h) - DQ_f(a-h, b-h)) / 2h, a central difference
    of the sum of the partials, with DQ_f'(a, b).

    The shifted pairs keep the gap b - a, so with ``plan.min_gap >= 4h``
    no difference quotient comes near the diagonal.
    """
    if plan.mode is not Mode.FLOAT:
        raise ModeError("the partials identity check runs in float mode only")
    if not h > 0:
        raise ValueError(f"step must be positive, got {h!r}")
    if plan.min_gap < 4 * h:
        raise StepTooLarge(
            f"step {h!r} needs sampled gaps of at least {4 * h!r}, "
            f"plan allows {plan.min_gap!r}"
        )

    quotient = DQView(f)
    derivative_quotient = DQView(fprime)
    ledger = SampleLedger("partials", tol, plan.mode)

    for pair in gen_pairs(plan):

        def check(pair=pair):
            a, b = pair
            central = (quotient(a + h, b + h) - quotient(a - h, b - h)) / (2 * h)
            reference = derivative_quotient(a, b)
            residual = central - reference
            allowance = FD_ALLOWANCE * h * h * (1 + magnitude(reference))
            passed = abs(residual) <= tol.bound(reference) + allowance
            ledger.record(pair, residual, passed)

        ledger.attempt(pair, check)

    report = ledger.report(details={"step": h, "allowance_factor": FD_ALLOWANCE})
    logger.debug("partials identity at h=%g: max residual %r", h, report.max_residual)
    return report
