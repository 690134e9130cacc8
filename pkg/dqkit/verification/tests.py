import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from criteria.algebraic import run_algebraic
from criteria.integrable import run_integrable
from criteria.matrix import run_matrix
from criteria.series import PowerSeries2D, summation_check
from criteria.verdicts import Verdict
from expressions.catalog import DIRICHLET_POOL, DIRICHLET_SOURCE
from expressions.evaluator import Expression
from expressions.nodes import Arity
from quadrature.kronrod import QuadratureConfig
from recovery.functions import (
    equispaced,
    recover_algebraic,
    recover_integral,
    recover_series,
)
from sampling.plans import SamplingPlan
from scalars.core import Mode, QRootTwo, Tolerance, parse_scalar
from scalars.exceptions import DiagonalUndefined, ModeError, StepTooLarge

from .checks import partials_identity_check, roundtrip_check
from .quotients import average_of, dq_of, polynomial_dq

SMOOTH_PLAN = SamplingPlan(count=32, min_gap=0.2)


def exact(value):
    return QRootTwo(Fraction(value))


def univariate(source):
    return Expression(source, Arity.UNIVARIATE)


class DQViewTest(SimpleTestCase):
    def test_square(self):
        H = dq_of(univariate("x^2"))
        self.assertEqual(H(exact("1/4"), exact("3/4")), exact(1))

    def test_symmetric_extension(self):
        H = dq_of(univariate("x^2"))
        self.assertEqual(H(exact("3/4"), exact("1/4")), exact(1))

    def test_diagonal_uses_the_derivative(self):
        H = dq_of(univariate("x^3"), univariate("3*x^2"))
        self.assertEqual(H(exact("1/2"), exact("1/2")), exact("3/4"))

    def test_diagonal_without_derivative(self):
        with self.assertRaises(DiagonalUndefined):
            dq_of(univariate("x^3"))(0.5, 0.5)

    def test_mixed_modes(self):
        with self.assertRaises(ModeError):
            dq_of(univariate("x^2"))(0.25, exact("3/4"))

    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_symmetry(self, a, b):
        if a == b:
            return
        H = dq_of(univariate("exp(x) - x^3"))
        self.assertEqual(H(a, b), H(b, a))


class PolynomialDQTest(SimpleTestCase):
    def test_exact_and_float_agree(self):
        H = polynomial_dq([1, Fraction(1, 2), 0, -2])
        self.assertEqual(H(exact(0), exact(1)), exact("-3/2"))
        self.assertAlmostEqual(H(0.0, 1.0), -1.5, delta=1e-15)

    def test_diagonal(self):
        H = polynomial_dq([0, 0, 0, 1])
        self.assertEqual(H(0.5, 0.5), 0.75)

    def test_random_polynomials_pass_every_criterion(self):
        rng = np.random.default_rng(2024)
        plan = SamplingPlan()
        for _ in range(50):
            degree = int(rng.integers(0, 7))
            coefficients = [float(c) for c in rng.uniform(-2, 2, degree + 1)]
            H = polynomial_dq(coefficients)
            self.assertEqual(run_algebraic(H, plan).verdict, Verdict.ACCEPT)
            self.assertEqual(run_matrix(H, plan).verdict, Verdict.ACCEPT)
            self.assertEqual(run_integrable(H, plan).verdict, Verdict.ACCEPT)

            f = H.f
            C = f(0.0)
            series = PowerSeries2D.from_polynomial_dq(coefficients)
            _, profile = summation_check(series)
            recoveries = (
                recover_algebraic(H, C),
                recover_integral(H, C),
                recover_series(profile, C, series.order),
            )
            for x in equispaced():
                for g in recoveries:
                    self.assertAlmostEqual(g(x), f(x), delta=1e-7)


class AverageValueTest(SimpleTestCase):
    def test_average_of_linear(self):
        H = average_of(univariate("2*x"))
        self.assertAlmostEqual(H(0.25, 0.75), 1.0, delta=1e-12)
        self.assertAlmostEqual(H(0.75, 0.25), 1.0, delta=1e-12)
        self.assertEqual(H(0.5, 0.5), 1.0)

    def test_average_of_exp_square_is_integrable(self):
        H = average_of(univariate("exp(x^2)"), QuadratureConfig(1e-12))
        report = run_integrable(H, SamplingPlan(count=100))
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertLessEqual(report.max_residual, 1e-9)

    def test_float_only(self):
        with self.assertRaises(ModeError):
            average_of(univariate("x"))(exact(0), exact(1))


class RoundtripTest(SimpleTestCase):
    def test_dirichlet(self):
        H = Expression(DIRICHLET_SOURCE)
        pool = tuple(parse_scalar(text, Mode.EXACT) for text in DIRICHLET_POOL)
        plan = SamplingPlan(count=64, mode=Mode.EXACT, exact_pool=pool)
        report = roundtrip_check(H, recover_algebraic(H, exact(1)), plan)
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertTrue(report.all_residuals_zero)

    def test_truncated_xexp_series(self):
        H = PowerSeries2D.from_function(lambda i, j: 1 / math.factorial(i + j), 20)
        _, profile = summation_check(H)
        f = recover_series(profile, 0.0, H.order)
        plan = SamplingPlan(min_gap=0.05)
        report = roundtrip_check(H, f, plan, Tolerance(1e-12, 1e-12))
        self.assertEqual(report.verdict, Verdict.ACCEPT)

    def test_product_is_rejected(self):
        H = Expression("a*b")
        report = roundtrip_check(H, recover_algebraic(H, 0.0), SamplingPlan())
        self.assertEqual(report.verdict, Verdict.REJECT)
        self.assertIsNotNone(report.witness)

    def test_evaluation_errors_are_inconclusive(self):
        f = univariate("ln(x)")
        report = roundtrip_check(dq_of(f), f, SamplingPlan(count=8))
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)


class PartialsIdentityTest(SimpleTestCase):
    def test_cube(self):
        report = partials_identity_check(
            univariate("x^3"), univariate("3*x^2"), SamplingPlan(), 1e-4
        )
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertLessEqual(report.max_residual, 1e-6)

    def test_linear(self):
        report = partials_identity_check(
            univariate("5*x"), univariate("5"), SamplingPlan(), 1e-4
        )
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertLessEqual(report.max_residual, 1e-6)

    def test_second_order_convergence(self):
        for source, derivative in (("exp(x)", "exp(x)"), ("sin(2*x)", "2*cos(2*x)")):
            f, fprime = univariate(source), univariate(derivative)
            coarse = partials_identity_check(f, fprime, SMOOTH_PLAN, 1e-4)
            fine = partials_identity_check(f, fprime, SMOOTH_PLAN, 5e-5)
            self.assertEqual(coarse.verdict, Verdict.ACCEPT)
            self.assertLessEqual(coarse.max_residual, 1e-6)
            ratio = coarse.max_residual / fine.max_residual
            self.assertGreaterEqual(ratio, 3.5, source)
            self.assertLessEqual(ratio, 4.5, source)

    def test_wrong_derivative_is_rejected(self):
        report = partials_identity_check(
            univariate("x^3"), univariate("x^2"), SamplingPlan(), 1e-4
        )
        self.assertEqual(report.verdict, Verdict.REJECT)

    def test_step_must_fit_the_gaps(self):
        with self.assertRaises(StepTooLarge):
            partials_identity_check(
                univariate("x^3"), univariate("3*x^2"), SamplingPlan(min_gap=1e-3), 1e-3
            )

    def test_float_only(self):
        plan = SamplingPlan(mode=Mode.EXACT, exact_pool=(0, Fraction(1, 2), 1))
        with self.assertRaises(ModeError):
            partials_identity_check(univariate("x^3"), univariate("3*x^2"), plan)
