"""
Algebraic recognition: the three-chord identity

    H(a,c)(c-a) = H(a,b)(b-a) + H(b,c)(c-b)    for all 0 <= a < b < c <= 1,

checked on sampled triples, or on pairs (b, c) with a pinned to 0. Residuals
are kept in cleared-denominator form.
"""
from __future__ import annotations

from enum import Enum
from typing import Callable

from sampling.plans import SamplingPlan, gen_anchored_pairs, gen_triples
from scalars.core import Scalar, Tolerance, mode_of, to_mode

from .verdicts import CriterionReport, SampleLedger

Bivariate = Callable[[Scalar, Scalar], Scalar]


class Variant(str, Enum):
    TRIPLE = "triple"
    ANCHORED = "anchored"


def _chord_terms(
    H: Bivariate, a: Scalar, b: Scalar, c: Scalar
) -> tuple[Scalar, Scalar, Scalar]:
    return H(a, c) * (c - a), H(a, b) * (b - a), H(b, c) * (c - b)


def _residual(terms: tuple[Scalar, Scalar, Scalar]) -> tuple[Scalar, Scalar]:
    whole, left, right = terms
    return whole - left - right, abs(whole) + abs(left) + abs(right)


def algebraic_residual_triple(H: Bivariate, a: Scalar, b: Scalar, c: Scalar) -> Scalar:
    """H(a,c)(c-a) - H(a,b)(b-a) - H(b,c)(c-b); zero iff the chords are consistent."""
    residual, _ = _residual(_chord_terms(H, a, b, c))
    return residual


def algebraic_residual_anchored(H: Bivariate, b: Scalar, c: Scalar) -> Scalar:
    """H(0,c)c - H(0,b)b - H(b,c)(c-b)."""
    return algebraic_residual_triple(H, to_mode(0, mode_of(b)), b, c)


def run_algebraic(
    H: Bivariate,
    plan: SamplingPlan,
    tol: Tolerance = Tolerance(),
    variant: Variant = Variant.TRIPLE,
) -> CriterionReport:
    variant = Variant(variant)
    ledger = SampleLedger("algebraic", tol, plan.mode)
    zero = to_mode(0, plan.mode)
    if variant is Variant.ANCHORED:
        samples = [(zero, b, c) for b, c in gen_anchored_pairs(plan)]
    else:
        samples = gen_triples(plan)

    for triple in samples:
        sample = triple[1:] if variant is Variant.ANCHORED else triple

        def check(triple=triple, sample=sample):
            residual, reference = _residual(_chord_terms(H, *triple))
            ledger.record(sample, residual, tol.passes(residual, reference))

        ledger.attempt(sample, check)
    return ledger.report(details={"variant": variant.value})
