import io
import math
from fractions import Fraction

from django.test import SimpleTestCase

from expressions.catalog import DIRICHLET_POOL, DIRICHLET_SOURCE
from expressions.evaluator import Expression
from sampling.plans import SamplingPlan
from scalars.core import Mode, QRootTwo, Tolerance, parse_scalar
from scalars.exceptions import SeriesFormatError

from .algebraic import (
    Variant,
    algebraic_residual_anchored,
    algebraic_residual_triple,
    run_algebraic,
)
from .integrable import integrable_residual, run_integrable
from .matrix import canonical_vector, chord_matrix, matrix_diagnostics, run_matrix
from .series import (
    ConvergenceProbe,
    PowerSeries2D,
    absolute_convergence_probe,
    read_series,
    run_summation,
    summation_check,
    write_series,
)
from .verdicts import Verdict, overall_verdict

SQUARE_DQ = Expression("(b^2-a^2)/(b-a)")
SQUARE_DQ_SMOOTH = Expression("a + b")
CUBE_DQ = Expression("a^2 + a*b + b^2")
PRODUCT = Expression("a*b")
CONSTANT = Expression("5")
DIRICHLET = Expression(DIRICHLET_SOURCE)

HALF = QRootTwo(Fraction(1, 2))
HALF_ROOT = QRootTwo(0, Fraction(1, 2))


def exact(value):
    return QRootTwo(Fraction(value))


def dirichlet_plan(count=200):
    pool = tuple(parse_scalar(text, Mode.EXACT) for text in DIRICHLET_POOL)
    return SamplingPlan(count=count, mode=Mode.EXACT, exact_pool=pool)


def xexp_series(order=20, mode=Mode.FLOAT):
    if mode is Mode.FLOAT:
        return PowerSeries2D.from_function(
            lambda i, j: 1 / math.factorial(i + j), order
        )
    return PowerSeries2D.from_function(
        lambda i, j: Fraction(1, math.factorial(i + j)), order
    )


class AlgebraicResidualTest(SimpleTestCase):
    def test_square_difference_quotient(self):
        self.assertEqual(algebraic_residual_triple(SQUARE_DQ, 0.0, 0.5, 1.0), 0.0)

    def test_product_is_not_a_difference_quotient(self):
        residual = algebraic_residual_triple(PRODUCT, 0.0, 0.5, 1.0)
        self.assertAlmostEqual(residual, -0.25, delta=1e-15)

    def test_dirichlet_rational_middle_irrational_end(self):
        residual = algebraic_residual_triple(DIRICHLET, exact(0), HALF, HALF_ROOT)
        self.assertEqual(residual, QRootTwo(0))

    def test_anchored(self):
        self.assertEqual(algebraic_residual_anchored(SQUARE_DQ_SMOOTH, 0.25, 1.0), 0.0)
        self.assertAlmostEqual(
            algebraic_residual_anchored(PRODUCT, 0.5, 1.0), -0.25, delta=1e-15
        )

    def test_anchored_dirichlet_irrational_then_rational(self):
        residual = algebraic_residual_anchored(DIRICHLET, HALF_ROOT, exact(Fraction(3, 4)))
        self.assertEqual(residual, QRootTwo(0))


class RunAlgebraicTest(SimpleTestCase):
    def test_dirichlet_anchored_exact(self):
        report = run_algebraic(DIRICHLET, dirichlet_plan(), variant=Variant.ANCHORED)
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertTrue(report.all_residuals_zero)
        self.assertEqual(report.max_residual, QRootTwo(0))
        self.assertEqual(report.details["variant"], "anchored")
        signatures = {
            (b.surd_part == 0, c.surd_part == 0) for b, c in (row.sample for row in report.samples)
        }
        self.assertEqual(len(signatures), 4)

    def test_anchored_and_triple_agree_in_exact_mode(self):
        plan = dirichlet_plan()
        for H in (DIRICHLET, PRODUCT, SQUARE_DQ_SMOOTH):
            anchored = run_algebraic(H, plan, variant=Variant.ANCHORED)
            triple = run_algebraic(H, plan, variant=Variant.TRIPLE)
            self.assertEqual(anchored.verdict, triple.verdict)

    def test_product_rejected_with_witness(self):
        report = run_algebraic(PRODUCT, SamplingPlan(seed=42, count=64))
        self.assertEqual(report.verdict, Verdict.REJECT)
        self.assertIsNotNone(report.witness)
        self.assertGreaterEqual(report.max_residual, 0.1)
        self.assertEqual(report.samples_checked, 64)

    def test_constant_accepted(self):
        report = run_algebraic(CONSTANT, SamplingPlan(count=64))
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertIsNone(report.all_residuals_zero)

    def test_evaluation_failures_are_inconclusive(self):
        H = Expression("piecewise{ b < 1 : a + b }")
        report = run_algebraic(H, SamplingPlan(count=20))
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertTrue(any("could not be evaluated" in note for note in report.notes))

    def test_report_serialises(self):
        data = run_algebraic(DIRICHLET, dirichlet_plan(12)).to_dict()
        self.assertEqual(data["criterion"], "algebraic")
        self.assertEqual(data["verdict"], "accept")
        self.assertEqual(data["max_residual"], "0/1")
        self.assertTrue(data["all_residuals_zero"])


class MatrixTest(SimpleTestCase):
    def test_chord_matrix_layout(self):
        M = chord_matrix(SQUARE_DQ_SMOOTH, 0.0, 0.5, 1.0)
        self.assertEqual(M.entries[0], (1.5, 1.0, 0.5))
        self.assertEqual(M.entries[1], (0.0, 0.5, 1.0))
        self.assertEqual(M.entries[2], (1.0, 1.0, 1.0))

    def test_diagnostics_of_a_difference_quotient(self):
        M = chord_matrix(SQUARE_DQ_SMOOTH, exact(0), HALF, exact(1))
        det, rank, basis = matrix_diagnostics(M)
        self.assertEqual(det, QRootTwo(0))
        self.assertEqual(rank, 2)
        self.assertEqual(basis, (exact(Fraction(-1, 2)), exact(1), exact(Fraction(-1, 2))))
        self.assertEqual(basis, canonical_vector(exact(0), HALF, exact(1)))

    def test_diagnostics_of_the_product(self):
        # det equals the three-chord residual at the same triple
        det, rank, basis = matrix_diagnostics(chord_matrix(PRODUCT, exact(0), HALF, exact(1)))
        self.assertEqual(det, exact(Fraction(-1, 4)))
        self.assertEqual(rank, 3)
        self.assertIsNone(basis)

    def test_float_rank(self):
        _, rank, basis = matrix_diagnostics(chord_matrix(CUBE_DQ, 0.1, 0.4, 0.8))
        self.assertEqual(rank, 2)
        self.assertAlmostEqual(basis[1], 1.0)

    def test_triple_must_increase(self):
        with self.assertRaises(ValueError):
            chord_matrix(PRODUCT, 0.5, 0.5, 1.0)

    def test_matches_the_algebraic_criterion(self):
        float_plan = SamplingPlan(seed=42, count=200)
        for H in (SQUARE_DQ, CUBE_DQ, PRODUCT, CONSTANT):
            matrix = run_matrix(H, float_plan)
            algebraic = run_algebraic(H, float_plan)
            self.assertEqual(matrix.verdict, algebraic.verdict, H)
            self.assertFalse(any("certificate" in note for note in matrix.notes))
        for H in (SQUARE_DQ, CUBE_DQ, PRODUCT, CONSTANT, DIRICHLET):
            matrix = run_matrix(H, dirichlet_plan())
            algebraic = run_algebraic(H, dirichlet_plan())
            self.assertEqual(matrix.verdict, algebraic.verdict, H)

    def test_null_vector_certificate(self):
        for a, b, c in ((0.0, 0.5, 1.0), (0.1, 0.2, 0.95), (0.3, 0.31, 0.6)):
            M = chord_matrix(CUBE_DQ, a, b, c)
            image = M.apply(canonical_vector(a, b, c))
            for component in image:
                self.assertLessEqual(abs(component), 1e-9)

    def test_run_matrix_verdicts(self):
        self.assertEqual(run_matrix(CUBE_DQ, SamplingPlan(count=64)).verdict, Verdict.ACCEPT)
        report = run_matrix(PRODUCT, SamplingPlan(count=64))
        self.assertEqual(report.verdict, Verdict.REJECT)
        self.assertEqual(report.witness, (0.0, 0.5, 1.0))
        exact_report = run_matrix(DIRICHLET, dirichlet_plan())
        self.assertEqual(exact_report.verdict, Verdict.ACCEPT)
        self.assertTrue(exact_report.all_residuals_zero)


class IntegrableTest(SimpleTestCase):
    def test_linear_trace(self):
        residual, quad_error, _ = integrable_residual(SQUARE_DQ_SMOOTH, 0.2, 0.9)
        self.assertAlmostEqual(residual, 0.0, delta=1e-10)
        self.assertLessEqual(quad_error, 1e-10)

    def test_product(self):
        residual, _, _ = integrable_residual(PRODUCT, 0.0, 1.0)
        self.assertAlmostEqual(residual, -1 / 3, delta=1e-12)

    def test_run_integrable(self):
        plan = SamplingPlan(seed=5, count=32)
        self.assertEqual(run_integrable(CUBE_DQ, plan).verdict, Verdict.ACCEPT)
        report = run_integrable(PRODUCT, plan)
        self.assertEqual(report.verdict, Verdict.REJECT)
        self.assertEqual(report.witness, (0.0, 1.0))
        self.assertAlmostEqual(report.max_residual, 1 / 3, delta=1e-12)

    def test_unbounded_trace_is_inconclusive(self):
        # difference quotient of ln; its trace 1/s is not integrable at 0
        H = Expression("piecewise{ a == b : 1/a ; true : (ln(b)-ln(a))/(b-a) }")
        report = run_integrable(H, SamplingPlan(seed=1, count=16))
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)

    def test_needs_float_plan(self):
        from scalars.exceptions import ModeError

        with self.assertRaises(ModeError):
            run_integrable(SQUARE_DQ_SMOOTH, dirichlet_plan())


class SummationTest(SimpleTestCase):
    def test_xexp_coefficients(self):
        verdict, profile = summation_check(xexp_series())
        self.assertEqual(verdict, Verdict.ACCEPT)
        self.assertEqual(sorted(profile), list(range(21)))
        for p, value in profile.items():
            self.assertAlmostEqual(value, 1 / math.factorial(p), delta=1e-18)

    def test_exact_xexp_coefficients(self):
        verdict, profile = summation_check(xexp_series(mode=Mode.EXACT))
        self.assertEqual(verdict, Verdict.ACCEPT)
        self.assertEqual(profile[5], exact(Fraction(1, 120)))

    def test_product(self):
        series = PowerSeries2D(2, {(1, 1): 1.0})
        verdict, _ = summation_check(series)
        self.assertEqual(verdict, Verdict.REJECT)
        report = run_summation(series)
        self.assertEqual(report.verdict, Verdict.REJECT)
        self.assertEqual(report.witness, (2, (2, 0), (1, 1)))

    def test_zero_series(self):
        verdict, profile = summation_check(PowerSeries2D(3, {}))
        self.assertEqual(verdict, Verdict.ACCEPT)
        self.assertEqual(profile, {0: 0.0, 1: 0.0, 2: 0.0, 3: 0.0})

    def test_convergence_probe(self):
        self.assertEqual(absolute_convergence_probe(xexp_series()), ConvergenceProbe.PLAUSIBLE)
        ones = PowerSeries2D.from_function(lambda i, j: 1.0, 12)
        self.assertEqual(absolute_convergence_probe(ones), ConvergenceProbe.IMPLAUSIBLE)
        self.assertEqual(absolute_convergence_probe(xexp_series(4)), ConvergenceProbe.UNKNOWN)

    def test_run_summation_notes_the_probe(self):
        report = run_summation(xexp_series())
        self.assertEqual(report.verdict, Verdict.ACCEPT)
        self.assertEqual(report.details["convergence"], ConvergenceProbe.PLAUSIBLE)
        self.assertIn("plausible", report.notes[0])

    def test_series_is_evaluable(self):
        series = xexp_series()
        # H(a, b) = (b e^b - a e^a) / (b - a)
        expected = (0.75 * math.exp(0.75) - 0.25 * math.exp(0.25)) / 0.5
        self.assertAlmostEqual(series(0.25, 0.75), expected, delta=1e-12)
        exact_series = PowerSeries2D.from_polynomial_dq([Fraction(0), Fraction(0), Fraction(1)])
        self.assertEqual(exact_series(exact(Fraction(1, 4)), HALF), exact(Fraction(3, 4)))
        self.assertEqual(exact_series(0.25, 0.5), 0.75)

    def test_polynomial_difference_quotient_series(self):
        series = PowerSeries2D.from_polynomial_dq([Fraction(3), Fraction(-1), Fraction(2), Fraction(5)])
        self.assertEqual(series.order, 2)
        self.assertEqual(series.coefficient(0, 0), exact(-1))
        self.assertEqual(series.coefficient(1, 0), exact(2))
        self.assertEqual(series.coefficient(1, 1), exact(5))
        self.assertEqual(summation_check(series)[0], Verdict.ACCEPT)

    def test_invalid_series(self):
        with self.assertRaises(ValueError):
            PowerSeries2D(2, {(2, 1): 1.0})
        with self.assertRaises(ValueError):
            PowerSeries2D(2, {(-1, 1): 1.0})


class SeriesFileTest(SimpleTestCase):
    def test_read(self):
        text = "# x e^x\n0 0 1\n1 0 1\n0 1 1\n\n2 0 1/2\n1 1 0.5  # decimal\n"
        series = read_series(io.StringIO(text), Mode.FLOAT)
        self.assertEqual(series.order, 2)
        self.assertEqual(series.coefficient(0, 2), 0.0)
        self.assertEqual(series.coefficient(1, 1), 0.5)

    def test_written_file_reads_back(self):
        series = xexp_series(6, Mode.EXACT)
        stream = io.StringIO()
        write_series(series, stream)
        self.assertTrue(stream.getvalue().startswith("0 0 1/1\n1 0 1/1\n0 1 1/1\n"))
        self.assertEqual(read_series(io.StringIO(stream.getvalue()), Mode.EXACT), series)

    def test_format_errors_carry_the_line(self):
        cases = {
            "0 0 1\n0 1\n": 2,
            "0 0 1\nx 1 2\n": 2,
            "0 0 1\n\n0 -1 2\n": 3,
            "0 0 1\n0 0 2\n": 2,
            "0 0 1/0\n": 1,
        }
        for text, line_number in cases.items():
            with self.assertRaises(SeriesFormatError) as ctx:
                read_series(io.StringIO(text), Mode.EXACT)
            self.assertEqual(ctx.exception.line_number, line_number, text)


class OverallVerdictTest(SimpleTestCase):
    def test_precedence(self):
        accept = run_algebraic(CONSTANT, SamplingPlan(count=8))
        reject = run_algebraic(PRODUCT, SamplingPlan(count=8))
        unsure = run_algebraic(Expression("piecewise{ b < 1 : 1 }"), SamplingPlan(count=8))
        self.assertEqual(overall_verdict([accept, accept]), Verdict.ACCEPT)
        self.assertEqual(overall_verdict([accept, unsure]), Verdict.INCONCLUSIVE)
        self.assertEqual(overall_verdict([unsure, reject, accept]), Verdict.REJECT)
        self.assertEqual(overall_verdict([]), Verdict.INCONCLUSIVE)

    def test_tolerance_changes_the_float_verdict(self):
        loose = Tolerance(abs_tol=1.0, rel_tol=0.0)
        self.assertEqual(run_algebraic(PRODUCT, SamplingPlan(count=16), loose).verdict, Verdict.ACCEPT)
