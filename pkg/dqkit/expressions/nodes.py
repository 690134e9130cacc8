"""Immutable syntax tree of the expression language."""
from __future__ import annotations

from dataclasses import dataclass, fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Union


class Arity(str, Enum):
    UNIVARIATE = "univariate"
    BIVARIATE = "bivariate"

    @property
    def variables(self) -> tuple[str, ...]:
        return ("x",) if self is Arity.UNIVARIATE else ("a", "b")


FLOAT_ONLY_FUNCTIONS = ("exp", "sin", "cos", "ln", "sqrt")


@dataclass(frozen=True)
class Const:
    text: str
    value: Fraction


@dataclass(frozen=True)
class Sqrt2:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div:
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class Call:
    function: str
    argument: Expr


@dataclass(frozen=True)
class Piecewise:
    branches: tuple[tuple[Pred, Expr], ...]


@dataclass(frozen=True)
class TruePred:
    pass


@dataclass(frozen=True)
class Compare:
    op: str  # one of "<", "<=", "=="
    left: Expr
    right: Expr


@dataclass(frozen=True)
class And:
    left: Pred
    right: Pred


@dataclass(frozen=True)
class Or:
    left: Pred
    right: Pred


@dataclass(frozen=True)
class Not:
    operand: Pred


@dataclass(frozen=True)
class IsRational:
    variable: str


Expr = Union[Const, Sqrt2, Var, Add, Sub, Mul, Div, Pow, Neg, Call, Piecewise]
Pred = Union[TruePred, Compare, And, Or, Not, IsRational]

BINARY_SYMBOLS = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def depth(node: Expr | Pred) -> int:
    """Height of the tree under ``node``, walked without recursion."""
    deepest, stack = 0, [(node, 1)]
    while stack:
        current, level = stack.pop()
        deepest = max(deepest, level)
        if isinstance(current, Piecewise):
            children = [part for branch in current.branches for part in branch]
        else:
            children = [getattr(current, field.name) for field in fields(current)]
        stack.extend((child, level + 1) for child in children if is_dataclass(child))
    return deepest


def to_source(node: Expr | Pred) -> str:
    """Fully parenthesised source text; parsing it gives back ``node``."""
    match node:
        case Const(text=text):
            return text
        case Sqrt2():
            return "sqrt2"
        case Var(name=name):
            return name
        case Add() | Sub() | Mul() | Div():
            symbol = BINARY_SYMBOLS[type(node)]
            return f"({to_source(node.left)}{symbol}{to_source(node.right)})"
        case Pow(base=base, exponent=exponent):
            return f"({to_source(base)}^{exponent})"
        case Neg(operand=operand):
            return f"(-{to_source(operand)})"
        case Call(function=function, argument=argument):
            return f"{function}({to_source(argument)})"
        case Piecewise(branches=branches):
            body = " ; ".join(f"{to_source(p)} : {to_source(e)}" for p, e in branches)
            return f"piecewise{{ {body} }}"
        case TruePred():
            return "true"
        case Compare(op=op, left=left, right=right):
            return f"{to_source(left)} {op} {to_source(right)}"
        case And(left=left, right=right):
            return f"({to_source(left)} && {to_source(right)})"
        case Or(left=left, right=right):
            return f"({to_source(left)} || {to_source(right)})"
        case Not(operand=operand):
            return f"!({to_source(operand)})"
        case IsRational(variable=variable):
            return f"rat({variable})"
    raise TypeError(f"not an expression node: {node!r}")
