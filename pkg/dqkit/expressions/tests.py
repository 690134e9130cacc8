from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from scalars.core import Mode, QRootTwo
from scalars.exceptions import (
    ArityError,
    DivisionByZero,
    EvalError,
    ExprSyntaxError,
    ModeError,
    NoBranchMatched,
)

from .catalog import DIRICHLET_SOURCE
from .evaluator import Expression, evaluate
from .nodes import (
    Add,
    And,
    Arity,
    Const,
    Div,
    IsRational,
    Not,
    Piecewise,
    Pow,
    Sub,
    TruePred,
    Var,
    to_source,
)
from .parser import parse_expr

HALF = QRootTwo(Fraction(1, 2))
HALF_ROOT = QRootTwo(0, Fraction(1, 2))


class ParseExprTest(SimpleTestCase):
    def test_difference_of_squares(self):
        ast = parse_expr("(b^2-a^2)/(b-a)", Arity.BIVARIATE)
        expected = Div(
            Sub(Pow(Var("b"), 2), Pow(Var("a"), 2)),
            Sub(Var("b"), Var("a")),
        )
        self.assertEqual(ast, expected)

    def test_dirichlet_piecewise(self):
        ast = parse_expr(DIRICHLET_SOURCE, Arity.BIVARIATE)
        self.assertIsInstance(ast, Piecewise)
        self.assertEqual(len(ast.branches), 4)
        first_guard, first_value = ast.branches[0]
        self.assertEqual(first_guard, And(IsRational("a"), IsRational("b")))
        self.assertEqual(first_value, Const("0", Fraction(0)))
        self.assertEqual(ast.branches[2][0], Not(IsRational("a")))
        self.assertEqual(ast.branches[3][0], TruePred())

    def test_unknown_identifier(self):
        with self.assertRaises(ExprSyntaxError) as ctx:
            parse_expr("x*q", Arity.UNIVARIATE)
        self.assertEqual(ctx.exception.position, 2)
        self.assertIn("q", ctx.exception.message)

    def test_unbalanced_parentheses(self):
        with self.assertRaises(ExprSyntaxError) as ctx:
            parse_expr("(((", Arity.BIVARIATE)
        self.assertEqual(ctx.exception.position, 3)

    def test_deep_nesting_is_a_syntax_error(self):
        source = "(" * 2000 + "a" + ")" * 2000
        with self.assertRaises(ExprSyntaxError) as ctx:
            parse_expr(source, Arity.BIVARIATE)
        self.assertIn("nested too deeply", ctx.exception.message)
        self.assertEqual(ctx.exception.position, 100)

    def test_nesting_up_to_the_limit(self):
        source = "(" * 99 + "a" + ")" * 99
        self.assertEqual(parse_expr(source, Arity.BIVARIATE), Var("a"))
        with self.assertRaises(ExprSyntaxError):
            parse_expr("piecewise{" + "!" * 2000 + "true : a}", Arity.BIVARIATE)

    def test_long_chains(self):
        self.assertIsInstance(parse_expr("+".join(["a"] * 150), Arity.BIVARIATE), Add)
        with self.assertRaises(ExprSyntaxError) as ctx:
            parse_expr("+".join(["a"] * 5000), Arity.BIVARIATE)
        self.assertIn("levels deep", ctx.exception.message)

    def test_wrong_arity(self):
        with self.assertRaises(ArityError):
            parse_expr("a+x", Arity.BIVARIATE)
        with self.assertRaises(ArityError):
            parse_expr("piecewise{ rat(a) : 1 ; true : 0 }", Arity.UNIVARIATE)

    def test_fractional_exponent_is_rejected(self):
        with self.assertRaises(ExprSyntaxError):
            parse_expr("a^0.5", Arity.BIVARIATE)
        with self.assertRaises(ExprSyntaxError):
            parse_expr("a^-1", Arity.BIVARIATE)

    def test_empty_source(self):
        with self.assertRaises(ExprSyntaxError):
            parse_expr("   ", Arity.BIVARIATE)

    def test_negation_binds_looser_than_power(self):
        self.assertEqual(to_source(parse_expr("-a^2", Arity.BIVARIATE)), "(-(a^2))")

    def test_parenthesised_predicates(self):
        source = "piecewise{ !(a < b && rat(b)) : 1 ; (a+b) < 1 : 2 ; true : 3 }"
        ast = parse_expr(source, Arity.BIVARIATE)
        self.assertEqual(len(ast.branches), 3)
        self.assertIsInstance(ast.branches[0][0], Not)
        self.assertEqual(ast.branches[1][0].op, "<")

    def test_pretty_print_fixpoint(self):
        sources = [
            DIRICHLET_SOURCE,
            "(b^2-a^2)/(b-a)",
            "-a^2 + 3*b/2 - sqrt2",
            "exp(a*b) - (-a)^3",
            "piecewise{ a <= 1/2 || a == b : a ; true : b }",
        ]
        for source in sources:
            ast = parse_expr(source, Arity.BIVARIATE)
            printed = to_source(ast)
            self.assertEqual(parse_expr(printed, Arity.BIVARIATE), ast)
            self.assertEqual(to_source(parse_expr(printed, Arity.BIVARIATE)), printed)


class EvaluateTest(SimpleTestCase):
    def test_dirichlet_irrational_right_endpoint(self):
        H = Expression(DIRICHLET_SOURCE)
        self.assertEqual(H(HALF, HALF_ROOT), QRootTwo(-1) / (HALF_ROOT - HALF))

    def test_dirichlet_all_branches(self):
        H = Expression(DIRICHLET_SOURCE)
        quarter = QRootTwo(Fraction(1, 4))
        self.assertEqual(H(quarter, HALF), QRootTwo(0))
        self.assertEqual(H(HALF_ROOT, QRootTwo(0, Fraction(3, 4))), QRootTwo(0))
        self.assertEqual(H(HALF_ROOT, QRootTwo(1)), 1 / (QRootTwo(1) - HALF_ROOT))

    def test_float_difference_quotient(self):
        H = Expression("(b^2-a^2)/(b-a)")
        self.assertEqual(H(0.25, 0.75), 1.0)

    def test_float_only_function_in_exact_mode(self):
        H = Expression("exp(a*b)")
        with self.assertRaises(ModeError):
            H(HALF, HALF_ROOT)
        self.assertAlmostEqual(H(1.0, 2.0), 7.38905609893065)

    def test_rationality_guard_needs_exact_mode(self):
        with self.assertRaises(ModeError):
            Expression(DIRICHLET_SOURCE)(0.25, 0.5)

    def test_division_by_zero(self):
        with self.assertRaises(DivisionByZero):
            Expression("1/(b-a)")(0.5, 0.5)

    def test_guard_false_branch_is_not_evaluated(self):
        H = Expression("piecewise{ a == b : 7 ; true : 1/(b-a) }")
        self.assertEqual(H(0.5, 0.5), 7.0)

    def test_no_branch_matched(self):
        with self.assertRaises(NoBranchMatched):
            Expression("piecewise{ a < 0 : 1 }")(0.5, 0.75)

    def test_domain_error(self):
        with self.assertRaises(EvalError):
            Expression("ln(a)")(0.0, 0.5)

    def test_mixed_mode_arguments(self):
        with self.assertRaises(ModeError):
            Expression("a+b")(0.5, HALF)
        with self.assertRaises(ModeError):
            ast = parse_expr("a+b", Arity.BIVARIATE)
            evaluate(ast, {"a": 0.5, "b": 0.25}, Mode.EXACT)

    def test_univariate(self):
        f = Expression("x^3 - 2*x + sqrt2", Arity.UNIVARIATE)
        self.assertEqual(f(QRootTwo(2)), QRootTwo(4, 1))


class ModeAgreementTest(SimpleTestCase):
    polynomial = Expression("3*a^3 - a*b^2 + 7/4*b - 2/3 + (a-b)^2")

    @given(
        st.integers(min_value=0, max_value=64),
        st.integers(min_value=0, max_value=64),
    )
    def test_polynomial_modes_agree(self, i, j):
        a, b = Fraction(i, 64), Fraction(j, 64)
        exact = self.polynomial(QRootTwo(a), QRootTwo(b))
        approx = self.polynomial(float(a), float(b))
        self.assertAlmostEqual(float(exact), approx, delta=1e-12 * max(1.0, abs(approx)))


class PrettyPrintPropertyTest(SimpleTestCase):
    leaves = st.sampled_from(["a", "b", "sqrt2", "1/3", "2", "0.5"])

    @given(
        st.recursive(
            leaves,
            lambda inner: st.one_of(
                st.tuples(inner, st.sampled_from("+-*/"), inner).map(
                    lambda t: f"({t[0]}{t[1]}{t[2]})"
                ),
                st.tuples(inner, st.integers(0, 4)).map(lambda t: f"({t[0]})^{t[1]}"),
                inner.map(lambda s: f"(-{s})"),
            ),
            max_leaves=12,
        )
    )
    def test_printing_is_a_fixpoint(self, source):
        ast = parse_expr(source, Arity.BIVARIATE)
        printed = to_source(ast)
        self.assertEqual(parse_expr(printed, Arity.BIVARIATE), ast)
