import gc
import io
import math
from fractions import Fraction

from django.core.cache import caches
from django.test import SimpleTestCase

from criteria.series import PowerSeries2D, summation_check
from expressions.catalog import DIRICHLET_POOL, DIRICHLET_SOURCE
from expressions.evaluator import Expression
from quadrature.kronrod import QuadratureConfig
from scalars.core import Mode, QRootTwo, is_rational, parse_scalar
from scalars.exceptions import MissingCoefficient, ModeError

from .cache_utils import breakpoint_key, reset_breakpoint_cache
from .functions import (
    BREAKPOINTS,
    IntegralRecovery,
    equispaced,
    recover_algebraic,
    recover_integral,
    recover_series,
)

EXP_SQUARE_INTEGRAL = math.fsum(
    1 / (math.factorial(n) * (2 * n + 1)) for n in range(30)
)


def exact(value):
    return QRootTwo(Fraction(value))


class AlgebraicRecoveryTest(SimpleTestCase):
    def test_dirichlet_function(self):
        f = recover_algebraic(Expression(DIRICHLET_SOURCE), exact(1))
        points = [parse_scalar(text, Mode.EXACT) for text in DIRICHLET_POOL]
        for x in points:
            if x > 1:
                continue
            expected = exact(1) if is_rational(x) else exact(0)
            self.assertEqual(f(x), expected, x)

    def test_constant_at_zero(self):
        f = recover_algebraic(Expression("1/(b-a)"), exact(7))
        self.assertEqual(f(exact(0)), exact(7))

    def test_square(self):
        f = recover_algebraic(Expression("a + b"), exact(0))
        self.assertEqual(f(exact("3/4")), exact("9/16"))
        self.assertEqual(f(0.5), 0.25)

    def test_constant_quotient(self):
        f = recover_algebraic(Expression("5"), exact(2))
        self.assertEqual(f(exact("1/3")), exact("11/3"))

    def test_float_constant_at_exact_point(self):
        f = recover_algebraic(Expression("a + b"), 0.5)
        with self.assertRaises(ModeError):
            f(exact("1/2"))

    def test_export_table(self):
        f = recover_algebraic(Expression("a + b"), exact(0))
        stream = io.StringIO()
        f.export(stream, [exact(0), exact("1/2"), exact(1)])
        self.assertEqual(stream.getvalue(), "0/1 0/1\n1/2 1/4\n1/1 1/1\nC 0/1\n")


class IntegralRecoveryTest(SimpleTestCase):
    def setUp(self):
        reset_breakpoint_cache()

    def test_exp_square_at_one(self):
        f = recover_integral(Expression("exp(a*b)"), 0.0)
        self.assertAlmostEqual(f(1.0), EXP_SQUARE_INTEGRAL, delta=1e-8)
        self.assertAlmostEqual(f(1.0), 1.46265174, delta=1e-8)

    def test_square(self):
        f = recover_integral(Expression("a + b"), 0.0)
        for x in (0.1, 0.3, 0.5, 0.77, 1.0):
            self.assertAlmostEqual(f(x), x * x, delta=1e-10)

    def test_empty_integral(self):
        f = recover_integral(Expression("exp(a*b)"), 3.0)
        self.assertEqual(f(0.0), 3.0)

    def test_breakpoints_are_memoized(self):
        f = recover_integral(Expression("exp(a*b)"), 0.0)
        cache = caches["recovery"]
        self.assertIsNone(cache.get(breakpoint_key(f.token, 0)))
        first = f(0.6)
        self.assertIsNotNone(cache.get(breakpoint_key(f.token, 0)))
        self.assertIsNone(cache.get(breakpoint_key(f.token, BREAKPOINTS - 1)))
        self.assertEqual(f(0.6), first)

    def test_reset_clears_only_breakpoints(self):
        f = recover_integral(Expression("a + b"), 0.0)
        cache = caches["recovery"]
        cache.set("unrelated_key", "value")
        f(1.0)
        reset_breakpoint_cache()
        self.assertIsNone(cache.get(breakpoint_key(f.token, 5)))
        self.assertEqual(cache.get("unrelated_key"), "value")
        self.assertAlmostEqual(f(1.0), 1.0, delta=1e-10)

    def test_instances_do_not_share_memo(self):
        square = recover_integral(Expression("a + b"), 0.0)
        cube = recover_integral(Expression("3*a*b"), 0.0)
        self.assertAlmostEqual(square(1.0), 1.0, delta=1e-10)
        self.assertAlmostEqual(cube(1.0), 1.0, delta=1e-10)
        self.assertAlmostEqual(cube(0.5), 0.125, delta=1e-10)

    def test_release(self):
        f = recover_integral(Expression("a + b"), 0.0)
        cache = caches["recovery"]
        f(1.0)
        f.release()
        for key in f.keys:
            self.assertIsNone(cache.get(key))
        self.assertAlmostEqual(f(1.0), 1.0, delta=1e-10)

    def test_memo_goes_with_the_instance(self):
        f = recover_integral(Expression("a + b"), 0.0)
        cache = caches["recovery"]
        f(1.0)
        keys = list(f.keys)
        self.assertIsNotNone(cache.get(keys[0]))
        del f
        gc.collect()
        for key in keys:
            self.assertIsNone(cache.get(key))

    def test_segments_share_the_error_target(self):
        f = IntegralRecovery(Expression("a + b"), 0.0, QuadratureConfig(1e-6))
        self.assertEqual(f.segment_cfg.target_abs_error, 1e-6 / BREAKPOINTS)
        self.assertLessEqual(f.integral(1.0).error_estimate, 1e-6)

    def test_domain(self):
        f = recover_integral(Expression("a + b"), 0.0)
        with self.assertRaises(ValueError):
            f(1.5)
        with self.assertRaises(ModeError):
            f(exact("1/2"))

    def test_summary(self):
        f = recover_integral(Expression("a + b"), 0.0, QuadratureConfig(1e-12))
        summary = f.as_dict()
        self.assertEqual(summary["kind"], "integral")
        self.assertEqual(summary["quadrature"]["target_abs_error"], 1e-12)


class SeriesRecoveryTest(SimpleTestCase):
    def test_x_exp_x(self):
        profile = {p: 1 / math.factorial(p) for p in range(21)}
        f = recover_series(profile, 0.0, 20)
        for k in range(11):
            x = k / 10
            self.assertAlmostEqual(f(x), x * math.exp(x), delta=1e-12)

    def test_linear(self):
        f = recover_series({0: exact(5)}, exact(2), 0)
        self.assertEqual(f(exact("1/2")), exact("9/2"))
        self.assertEqual(f.order, 0)

    def test_missing_coefficient(self):
        with self.assertRaises(MissingCoefficient):
            recover_series({}, 0.0, 0)
        with self.assertRaises(MissingCoefficient):
            recover_series({0: 1.0, 2: 1.0}, 0.0, 2)

    def test_export(self):
        f = recover_series({0: exact(1), 1: exact("1/2")}, exact(3), 1)
        stream = io.StringIO()
        f.export(stream)
        self.assertEqual(stream.getvalue(), "0 1/1\n1 1/2\nC 3/1\n")


class RecoveryPropertiesTest(SimpleTestCase):
    def test_constant_shift(self):
        H = Expression("a + b")
        for build in (
            lambda C: recover_algebraic(H, C),
            lambda C: recover_integral(H, C),
            lambda C: recover_series({0: 0.0, 1: 1.0}, C, 1),
        ):
            low, high = build(1.0), build(3.5)
            for x in equispaced():
                self.assertAlmostEqual(high(x) - low(x), 2.5, delta=1e-12)

    def test_exact_constant_shift(self):
        H = Expression(DIRICHLET_SOURCE)
        low, high = recover_algebraic(H, exact(0)), recover_algebraic(H, exact(1))
        for x in equispaced(Mode.EXACT) + [QRootTwo(0, Fraction(1, 2))]:
            self.assertEqual(high(x) - low(x), exact(1))

    def test_constructions_agree(self):
        # f(x) = x - 2x^2 + x^3
        H = PowerSeries2D.from_polynomial_dq([0.0, 1.0, -2.0, 1.0])
        _, profile = summation_check(H)

        def f(x):
            return x - 2 * x**2 + x**3

        recoveries = (
            recover_algebraic(H, 0.0),
            recover_integral(H, 0.0),
            recover_series(profile, 0.0, H.order),
        )
        for x in equispaced():
            for g in recoveries:
                self.assertAlmostEqual(g(x), f(x), delta=1e-9)
