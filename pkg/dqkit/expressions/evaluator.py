from __future__ import annotations

import math
from collections.abc import Mapping

from scalars.core import Mode, QRootTwo, Scalar, is_rational, mode_of, scalar_div, to_mode
from scalars.exceptions import EvalError, ModeError, NoBranchMatched

from .nodes import (
    Add,
    And,
    Arity,
    Call,
    Compare,
    Const,
    Div,
    Expr,
    IsRational,
    Mul,
    Neg,
    Not,
    Or,
    Piecewise,
    Pow,
    Pred,
    Sqrt2,
    Sub,
    TruePred,
    Var,
    to_source,
)
from .parser import parse_expr


FUNCTIONS = {
    "exp": math.exp,
    "sin": math.sin,
    "cos": math.cos,
    "ln": math.log,
    "sqrt": math.sqrt,
}

SQRT2_FLOAT = math.sqrt(2.0)


def _bind(value: object, mode: Mode) -> Scalar:
    if mode is Mode.FLOAT and isinstance(value, QRootTwo):
        raise ModeError("exact value bound in a float-mode evaluation")
    return to_mode(value, mode)


def evaluate(node: Expr, bindings: Mapping[str, object], mode: Mode) -> Scalar:
    """Value of ``node``; piecewise branches are evaluated lazily, first true guard wins."""
    env = {name: _bind(value, mode) for name, value in bindings.items()}
    return _eval(node, env, mode)


def _eval(node: Expr, env: dict[str, Scalar], mode: Mode) -> Scalar:
    match node:
        case Const(value=value):
            return to_mode(value, mode)
        case Sqrt2():
            return QRootTwo.sqrt2() if mode is Mode.EXACT else SQRT2_FLOAT
        case Var(name=name):
            try:
                return env[name]
            except KeyError:
                raise EvalError(f"variable {name!r} is not bound") from None
        case Add(left=left, right=right):
            return _eval(left, env, mode) + _eval(right, env, mode)
        case Sub(left=left, right=right):
            return _eval(left, env, mode) - _eval(right, env, mode)
        case Mul(left=left, right=right):
            return _eval(left, env, mode) * _eval(right, env, mode)
        case Div(left=left, right=right):
            return scalar_div(_eval(left, env, mode), _eval(right, env, mode))
        case Pow(base=base, exponent=exponent):
            try:
                return _eval(base, env, mode) ** exponent
            except OverflowError as exc:
                raise EvalError(f"overflow in {to_source(node)}") from exc
        case Neg(operand=operand):
            return -_eval(operand, env, mode)
        case Call(function=function, argument=argument):
            if mode is Mode.EXACT:
                raise ModeError(f"{function}() is only available in float mode")
            value = _eval(argument, env, mode)
            try:
                return FUNCTIONS[function](value)
            except (ValueError, OverflowError) as exc:
                raise EvalError(f"{function}({value!r}) is undefined") from exc
        case Piecewise(branches=branches):
            for guard, branch in branches:
                if _test(guard, env, mode):
                    return _eval(branch, env, mode)
            raise NoBranchMatched(f"no guard holds in {to_source(node)}")
    raise TypeError(f"not an expression node: {node!r}")


def _test(pred: Pred, env: dict[str, Scalar], mode: Mode) -> bool:
    match pred:
        case TruePred():
            return True
        case Compare(op=op, left=left, right=right):
            lhs, rhs = _eval(left, env, mode), _eval(right, env, mode)
            if op == "<":
                return lhs < rhs
            if op == "<=":
                return lhs <= rhs
            return lhs == rhs
        case And(left=left, right=right):
            return _test(left, env, mode) and _test(right, env, mode)
        case Or(left=left, right=right):
            return _test(left, env, mode) or _test(right, env, mode)
        case Not(operand=operand):
            return not _test(operand, env, mode)
        case IsRational(variable=variable):
            return is_rational(_eval(Var(variable), env, mode))
    raise TypeError(f"not a predicate node: {pred!r}")


class Expression:
    """
    A parsed DSL function, callable as f(x) or H(a, b).

    The evaluation mode follows the arguments: exact scalars (or rationals)
    evaluate in Q(sqrt 2), floats in double precision.
    """

    def __init__(self, source: str, arity: Arity = Arity.BIVARIATE):
        self.source = source
        self.arity = arity
        self.ast = parse_expr(source, arity)

    def __repr__(self) -> str:
        return f"Expression({self.source!r}, {self.arity.value})"

    def __str__(self) -> str:
        return self.source

    def __call__(self, *args: Scalar) -> Scalar:
        names = self.arity.variables
        if len(args) != len(names):
            raise TypeError(f"{self.arity.value} expression takes {len(names)} arguments")
        modes = {mode_of(value) for value in args}
        if len(modes) > 1:
            raise ModeError("arguments mix float and exact scalars")
        return evaluate(self.ast, dict(zip(names, args)), modes.pop())
