"""
Recursive-descent parser of the expression language.

    expr      := term (('+'|'-') term)*
    term      := factor (('*'|'/') factor)*
    factor    := ['-'] atom ['^' integer]
    atom      := number | 'sqrt2' | var | name '(' expr ')' | '(' expr ')' | piecewise
    piecewise := 'piecewise' '{' branch (';' branch)* '}'
    branch    := pred ':' expr
    pred      := 'true' | 'rat' '(' var ')' | expr ('<'|'<='|'==') expr
               | pred '&&' pred | pred '||' pred | '!' pred

'!' binds tighter than '&&', which binds tighter than '||'. A rational
literal ``p/q`` is read as the division of two integer constants, which has
the same value in both modes.
"""
from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

from scalars.exceptions import ArityError, ExprSyntaxError

from .nodes import (
    FLOAT_ONLY_FUNCTIONS,
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
    depth,
)

TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>&&|\|\||<=|==|[-+*/^()<!{};:])
    """,
    re.VERBOSE,
)

COMPARISONS = ("<", "<=", "==")
ALL_VARIABLES = ("a", "b", "x")
# parenthesised or called subexpressions inside one another
MAX_NESTING = 100
# height of the finished tree, long operator chains included
MAX_DEPTH = 200


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "ident", "op" or "end"
    text: str
    position: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    position = 0
    while position < len(source):
        match = TOKEN_RE.match(source, position)
        if match is None:
            raise ExprSyntaxError(position, f"unexpected character {source[position]!r}")
        if match.lastgroup != "space":
            tokens.append(Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class Parser:
    def __init__(self, source: str, arity: Arity):
        self.tokens = tokenize(source)
        self.index = 0
        self.arity = arity
        self.nesting = 0

    @contextmanager
    def nested(self):
        if self.nesting >= MAX_NESTING:
            raise self.error("expression nested too deeply")
        self.nesting += 1
        try:
            yield
        finally:
            self.nesting -= 1

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Token | None = None) -> ExprSyntaxError:
        token = token or self.current
        if token.kind == "end":
            message = f"{message} (unexpected end of input)"
        return ExprSyntaxError(token.position, message)

    def accept(self, text: str) -> bool:
        if self.current.kind in ("op", "ident") and self.current.text == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.error(f"expected {text!r}, found {self.current.text!r}")

    def variable(self, token: Token) -> str:
        if token.text not in self.arity.variables:
            raise ArityError(
                f"variable {token.text!r} at position {token.position} is not "
                f"declared for a {self.arity.value} expression"
            )
        return token.text

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected {self.current.text!r}")
        return node

    def expr(self) -> Expr:
        with self.nested():
            node = self.term()
            while self.current.text in ("+", "-") and self.current.kind == "op":
                node_type = Add if self.current.text == "+" else Sub
                self.index += 1
                node = node_type(node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.current.text in ("*", "/") and self.current.kind == "op":
            node_type = Mul if self.current.text == "*" else Div
            self.index += 1
            node = node_type(node, self.factor())
        return node

    def factor(self) -> Expr:
        negate = self.accept("-")
        node = self.atom()
        if self.accept("^"):
            token = self.current
            if token.kind != "number" or not token.text.isdigit():
                raise self.error("exponent must be a nonnegative integer literal")
            self.index += 1
            node = Pow(node, int(token.text))
        return Neg(node) if negate else node

    def atom(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.index += 1
            return Const(token.text, Fraction(token.text))
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        if token.kind != "ident":
            raise self.error(f"unexpected {token.text!r}")
        self.index += 1
        name = token.text
        if name == "sqrt2":
            return Sqrt2()
        if name in ALL_VARIABLES:
            return Var(self.variable(token))
        if name == "piecewise":
            return self.piecewise()
        if name in FLOAT_ONLY_FUNCTIONS:
            self.expect("(")
            argument = self.expr()
            self.expect(")")
            return Call(name, argument)
        raise self.error(f"unknown identifier {name!r}", token)

    def piecewise(self) -> Piecewise:
        self.expect("{")
        branches = [self.branch()]
        while self.accept(";"):
            branches.append(self.branch())
        self.expect("}")
        return Piecewise(tuple(branches))

    def branch(self) -> tuple[Pred, Expr]:
        guard = self.pred()
        self.expect(":")
        return guard, self.expr()

    def pred(self) -> Pred:
        with self.nested():
            node = self.and_pred()
            while self.accept("||"):
                node = Or(node, self.and_pred())
        return node

    def and_pred(self) -> Pred:
        node = self.unary_pred()
        while self.accept("&&"):
            node = And(node, self.unary_pred())
        return node

    def unary_pred(self) -> Pred:
        if self.accept("!"):
            with self.nested():
                return Not(self.unary_pred())
        return self.primary_pred()

    def primary_pred(self) -> Pred:
        if self.accept("true"):
            return TruePred()
        if self.accept("rat"):
            self.expect("(")
            token = self.current
            if token.kind != "ident" or token.text not in ALL_VARIABLES:
                raise self.error("rat() takes a variable")
            self.index += 1
            self.expect(")")
            return IsRational(self.variable(token))
        if self.current.text == "(":
            # either a parenthesised predicate or the left side of a comparison
            start = self.index
            self.index += 1
            try:
                node = self.pred()
                self.expect(")")
                return node
            except ExprSyntaxError:
                self.index = start
        left = self.expr()
        op = self.current.text
        if self.current.kind != "op" or op not in COMPARISONS:
            raise self.error(f"expected a comparison, found {op!r}")
        self.index += 1
        return Compare(op, left, self.expr())


def parse_expr(source: str, arity: Arity) -> Expr:
    if not source or not source.strip():
        raise ExprSyntaxError(0, "empty expression")
    node = Parser(source, arity).parse()
    if depth(node) > MAX_DEPTH:
        raise ExprSyntaxError(0, f"expression is more than {MAX_DEPTH} levels deep")
    return node
