"""Arithmetic expressions in one variable ``x`` for coefficient configs.

Grammar (lowest to highest precedence)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" unary)?          # right-associative
    atom   := number | "x" | name "(" expr ")" | "(" expr ")"

so ``-x^2`` is ``-(x^2)`` and ``2^3^2`` is ``2^(3^2)``.  Functions: exp,
log, sin, cos, sqrt, tanh.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import EvaluationError, SturmSpecError

__all__ = ["ExprSyntaxError", "Num", "Var", "Neg", "BinOp", "Call",
           "Expression", "parse_expression", "FUNCTIONS"]

FUNCTIONS = {
    "exp": math.exp, "log": math.log, "sin": math.sin, "cos": math.cos,
    "sqrt": math.sqrt, "tanh": math.tanh,
}

_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


class ExprSyntaxError(SturmSpecError, ValueError):
    """Malformed expression; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Num:
    value: float

    def eval(self, x):
        return self.value

    def __str__(self):
        return repr(self.value)


@dataclass(frozen=True)
class Var:
    def eval(self, x):
        return x

    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Neg:
    arg: object

    def eval(self, x):
        return -self.arg.eval(x)

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def eval(self, x):
        a = self.left.eval(x)
        b = self.right.eval(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            return a / b
        return a ** b

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call:
    name: str
    arg: object

    def eval(self, x):
        return FUNCTIONS[self.name](self.arg.eval(x))

    def __str__(self):
        return f"{self.name}({self.arg})"


def _tokenize(src):
    out = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value:
            raise ExprSyntaxError(f"expected {value!r}, found "
                                  f"{text or 'end of input'!r}", pos)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text not in FUNCTIONS:
                raise ExprSyntaxError(f"unknown identifier {text!r}", pos)
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(text, arg)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


class Expression:
    """Parsed expression, callable as ``expr(x)``; picklable."""

    def __init__(self, source, ast):
        self.source = source
        self.ast = ast

    def __call__(self, x):
        try:
            v = self.ast.eval(float(x))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise EvaluationError(f"{self.source!r} undefined at x={x}: "
                                  f"{exc}") from exc
        if isinstance(v, complex) or not math.isfinite(v):
            raise EvaluationError(f"{self.source!r} is not finite at x={x}")
        return v

    def __repr__(self):
        return f"Expression({self.source!r})"

    def __eq__(self, other):
        return isinstance(other, Expression) and other.ast == self.ast

    def __hash__(self):
        return hash(self.ast)


def parse_expression(src: str) -> Expression:
    p = _Parser(src)
    node = p.expr()
    kind, text, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected {text!r}", pos)
    return Expression(src, node)
