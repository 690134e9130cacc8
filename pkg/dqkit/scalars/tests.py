from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from .core import (
    Mode,
    QRootTwo,
    Tolerance,
    format_scalar,
    is_rational,
    parse_scalar,
    scalar_div,
)
from .exceptions import DivisionByZero, ModeError, ScalarFormatError

HALF = Fraction(1, 2)

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


class ScalarDivisionTest(SimpleTestCase):
    def test_inverse_of_sqrt2(self):
        self.assertEqual(scalar_div(QRootTwo(1), QRootTwo(0, 1)), QRootTwo(0, HALF))

    def test_self_quotient_is_one(self):
        x = QRootTwo(3, 1)
        self.assertEqual(scalar_div(x, x), QRootTwo(1))

    def test_float_division(self):
        self.assertEqual(scalar_div(1.0, 4.0), 0.25)

    def test_zero_divisor(self):
        with self.assertRaises(DivisionByZero):
            scalar_div(QRootTwo(1), QRootTwo(0))
        with self.assertRaises(ZeroDivisionError):
            scalar_div(1.0, 0.0)

    def test_mixed_modes_are_refused(self):
        with self.assertRaises(ModeError):
            scalar_div(QRootTwo(1), 2.0)
        with self.assertRaises(ModeError):
            QRootTwo(1) + 0.5
        with self.assertRaises(ModeError):
            0.5 * QRootTwo(1)


class RationalityTest(SimpleTestCase):
    def test_is_rational(self):
        self.assertTrue(is_rational(QRootTwo(HALF)))
        self.assertFalse(is_rational(QRootTwo(0, HALF)))
        self.assertTrue(is_rational(QRootTwo(Fraction(7, 3))))

    def test_float_mode_is_undecidable(self):
        with self.assertRaises(ModeError):
            is_rational(0.5)


class OrderingTest(SimpleTestCase):
    def test_surd_ordering(self):
        half_root = QRootTwo(0, HALF)  # ~0.7071
        self.assertLess(QRootTwo(HALF), half_root)
        self.assertLess(half_root, QRootTwo(Fraction(3, 4)))
        self.assertGreater(QRootTwo(0, Fraction(3, 4)), QRootTwo(1))  # ~1.06
        self.assertLess(QRootTwo(1, -1), QRootTwo(0))

    def test_sign_with_opposite_parts(self):
        self.assertEqual(QRootTwo(3, -2).sign(), 1)  # 3 - 2.83
        self.assertEqual(QRootTwo(2, -2).sign(), -1)

    def test_float_value(self):
        self.assertAlmostEqual(float(QRootTwo(HALF, HALF)), 0.5 + 0.5 * 2**0.5)


class ScalarTextTest(SimpleTestCase):
    def test_format(self):
        self.assertEqual(format_scalar(QRootTwo(HALF)), "1/2")
        self.assertEqual(format_scalar(QRootTwo(0, HALF)), "0/1+1/2*sqrt2")
        self.assertEqual(format_scalar(QRootTwo(1, Fraction(-1, 3))), "1/1-1/3*sqrt2")
        self.assertEqual(format_scalar(0.1), "0.1")

    def test_parse_exact(self):
        self.assertEqual(parse_scalar("1/2", Mode.EXACT), QRootTwo(HALF))
        self.assertEqual(parse_scalar("0/1+1/2*sqrt2", Mode.EXACT), QRootTwo(0, HALF))
        self.assertEqual(parse_scalar("3/4-1/4*sqrt2", Mode.EXACT), QRootTwo(Fraction(3, 4), Fraction(-1, 4)))
        self.assertEqual(parse_scalar("-sqrt2", Mode.EXACT), QRootTwo(0, -1))
        self.assertEqual(parse_scalar("0.25", Mode.EXACT), QRootTwo(Fraction(1, 4)))

    def test_parse_float(self):
        self.assertEqual(parse_scalar("0.25", Mode.FLOAT), 0.25)
        self.assertEqual(parse_scalar("1/4", Mode.FLOAT), 0.25)
        self.assertAlmostEqual(parse_scalar("1/2*sqrt2", Mode.FLOAT), 2**0.5 / 2)

    def test_parse_rejects_garbage(self):
        for text in ("", "1/0", "abc", "1/2.5"):
            with self.assertRaises(ScalarFormatError):
                parse_scalar(text, Mode.EXACT)

    @given(rationals, rationals)
    def test_text_form_reads_back(self, q, r):
        value = QRootTwo(q, r)
        self.assertEqual(parse_scalar(format_scalar(value), Mode.EXACT), value)


class FieldPropertiesTest(SimpleTestCase):
    @given(rationals, rationals)
    def test_product_with_inverse_is_one(self, q, r):
        x = QRootTwo(q, r)
        if not x:
            return
        self.assertEqual(x * (1 / x), QRootTwo(1))

    @given(rationals, rationals, rationals, rationals)
    def test_closure_under_division(self, q1, r1, q2, r2):
        n, d = QRootTwo(q1, r1), QRootTwo(q2, r2)
        if not d:
            return
        quotient = scalar_div(n, d)
        self.assertIsInstance(quotient, QRootTwo)
        self.assertEqual(quotient * d, n)

    def test_integer_powers(self):
        root = QRootTwo.sqrt2()
        self.assertEqual(root**2, QRootTwo(2))
        self.assertEqual(root**-2, QRootTwo(HALF))
        self.assertEqual(QRootTwo(1, 1) ** 0, QRootTwo(1))


class ToleranceTest(SimpleTestCase):
    def test_float_bound(self):
        tol = Tolerance(abs_tol=1e-9, rel_tol=1e-9)
        self.assertTrue(tol.passes(1.5e-9, reference=1.0))
        self.assertFalse(tol.passes(3e-9, reference=1.0))

    def test_exact_mode_ignores_tolerances(self):
        tol = Tolerance(abs_tol=1.0, rel_tol=1.0)
        self.assertTrue(tol.passes(QRootTwo(0)))
        self.assertFalse(tol.passes(QRootTwo(Fraction(1, 10**30))))

    def test_negative_tolerance_rejected(self):
        with self.assertRaises(ValueError):
            Tolerance(abs_tol=-1.0)

    @given(
        st.floats(min_value=-1, max_value=1),
        st.floats(min_value=0, max_value=1e-3),
        st.floats(min_value=0, max_value=1e-3),
        st.floats(min_value=0, max_value=1e-3),
    )
    def test_loosening_never_flips_pass_to_fail(self, residual, abs_tol, rel_tol, extra):
        tight = Tolerance(abs_tol, rel_tol)
        if tight.passes(residual, reference=1.0):
            self.assertTrue(Tolerance(abs_tol + extra, rel_tol).passes(residual, 1.0))
            self.assertTrue(Tolerance(abs_tol, rel_tol + extra).passes(residual, 1.0))
