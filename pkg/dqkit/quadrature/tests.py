import math

from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from expressions.evaluator import Expression
from scalars.core import QRootTwo
from scalars.exceptions import DivisionByZero, ModeError, NonConvergence

from .kronrod import QuadratureConfig, QuadratureResult, integrate, integrate_diagonal

# series of e^{s^2} integrated term by term over [0, 1]
EXP_SQUARE_INTEGRAL = math.fsum(
    1 / (math.factorial(n) * (2 * n + 1)) for n in range(40)
)


class IntegrateDiagonalTest(SimpleTestCase):
    def test_linear_trace(self):
        result = integrate_diagonal(Expression("a + b"), 0.0, 1.0)
        self.assertIsInstance(result, QuadratureResult)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-10)
        self.assertLessEqual(result.error_estimate, 1e-10)

    def test_exp_square_trace(self):
        H = Expression("exp(a*b)")
        result = integrate_diagonal(H, 0.0, 1.0)
        self.assertAlmostEqual(result.value, EXP_SQUARE_INTEGRAL, delta=1e-10)
        self.assertAlmostEqual(result.value, 1.4626517459071816, delta=1e-10)

    def test_empty_interval(self):
        result = integrate_diagonal(Expression("1/(b-a)"), 0.3, 0.3)
        self.assertEqual(result.value, 0.0)
        self.assertEqual(result.subdivisions, 0)

    def test_evaluation_errors_propagate(self):
        with self.assertRaises(DivisionByZero):
            integrate_diagonal(Expression("(b^2-a^2)/(b-a)"), 0.0, 1.0)

    def test_exact_endpoints_are_refused(self):
        with self.assertRaises(ModeError):
            integrate_diagonal(Expression("a + b"), QRootTwo(0), QRootTwo(1))


class IntegrateTest(SimpleTestCase):
    def test_cubic_is_integrated_exactly(self):
        result = integrate(lambda s: 4 * s**3 - 3 * s**2 + 0.5, 0.1, 0.9)
        closed_form = (0.9**4 - 0.9**3 + 0.45) - (0.1**4 - 0.1**3 + 0.05)
        self.assertAlmostEqual(result.value, closed_form, delta=1e-13)
        self.assertEqual(result.subdivisions, 0)

    def test_oscillating_integrand_is_refined(self):
        result = integrate(lambda s: math.sin(40 * s), 0.0, 1.0)
        self.assertAlmostEqual(result.value, (1 - math.cos(40.0)) / 40, delta=1e-10)
        self.assertGreater(result.subdivisions, 0)

    def test_mild_singularity(self):
        result = integrate(lambda s: 1 / math.sqrt(s), 0.0, 1.0)
        self.assertAlmostEqual(result.value, 2.0, delta=1e-9)

    def test_non_integrable_trace(self):
        with self.assertRaises(NonConvergence) as ctx:
            integrate(lambda s: 1 / s, 0.0, 1.0, QuadratureConfig(max_subdivisions=40))
        self.assertEqual(ctx.exception.subdivisions, 40)
        self.assertGreater(ctx.exception.error_estimate, 1e-10)
        self.assertTrue(math.isfinite(ctx.exception.value))

    def test_reversed_interval(self):
        with self.assertRaises(ValueError):
            integrate(math.exp, 0.8, 0.2)

    def test_config_validation(self):
        with self.assertRaises(ValueError):
            QuadratureConfig(target_abs_error=0.0)
        with self.assertRaises(ValueError):
            QuadratureConfig(max_subdivisions=0)

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_additivity(self, x, y, z):
        a, b, c = sorted((x, y, z))
        g = lambda s: math.exp(s * s) * math.cos(3 * s)  # noqa: E731
        cfg = QuadratureConfig()
        whole = integrate(g, a, c, cfg).value
        parts = integrate(g, a, b, cfg).value + integrate(g, b, c, cfg).value
        self.assertLessEqual(abs(whole - parts), 3 * cfg.target_abs_error)
