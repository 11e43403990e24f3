"""Recursive-descent parser for rate expressions over the time variable t.

Grammar (loosest to tightest binding):
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | 't' | 'pi' | 'e' | NAME '(' expr ')' | '(' expr ')'

Exponentiation binds tighter than unary minus, so "-2^2" is -(2^2) = -4.
Errors carry the byte offset into the source text.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import List, Tuple

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "sqrt": math.sqrt,
    "abs": abs,
}

CONSTANTS = {"pi": math.pi, "e": math.e}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class RateParseError(ValueError):
    """Parse failure; ``position`` is the byte offset into the source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise RateParseError(f"unexpected character {stripped[0]!r}", at)
        if m.group("num") is not None:
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.next()
        if tok is None or tok[0] != "op" or tok[1] != op:
            pos = tok[2] if tok else len(self.text)
            raise RateParseError(f"expected {op!r}", pos)

    def parse(self):
        if not self.tokens:
            raise RateParseError("empty expression", 0)
        node = self.expr()
        tok = self.peek()
        if tok is not None:
            raise RateParseError(f"unexpected token {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.next()
                node = ("bin", tok[1], node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self.next()
                node = ("bin", tok[1], node, self.unary())
            else:
                return node

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.next()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            return ("bin", "^", base, self.unary())
        return base

    def atom(self):
        tok = self.next()
        if tok is None:
            raise RateParseError("unexpected end of input", len(self.text))
        kind, value, pos = tok
        if kind == "num":
            return ("num", float(value))
        if kind == "name":
            if value == "t":
                return ("var",)
            if value in CONSTANTS:
                return ("const", value)
            if value in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return ("call", value, arg)
            raise RateParseError(f"unknown identifier {value!r}", pos)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise RateParseError(f"unexpected token {value!r}", pos)


def _eval(node, t: float) -> float:
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "var":
        return t
    if kind == "const":
        return CONSTANTS[node[1]]
    if kind == "neg":
        return -_eval(node[1], t)
    if kind == "call":
        return FUNCTIONS[node[1]](_eval(node[2], t))
    op, a, b = node[1], _eval(node[2], t), _eval(node[3], t)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a / b
    return a ** b


def _print(node) -> str:
    kind = node[0]
    if kind == "num":
        return repr(node[1])
    if kind == "var":
        return "t"
    if kind == "const":
        return node[1]
    if kind == "neg":
        return f"(-{_print(node[1])})"
    if kind == "call":
        return f"{node[1]}({_print(node[2])})"
    return f"({_print(node[2])}{node[1]}{_print(node[3])})"


@dataclass(frozen=True)
class RateExpression:
    """Parsed rate expression; callable as a RateFunction of t."""

    source: str
    ast: tuple

    def __call__(self, t: float) -> float:
        return _eval(self.ast, t)

    def to_source(self) -> str:
        """Fully parenthesised form that reparses to an equivalent expression."""
        return _print(self.ast)


def parse_rate_expr(text: str) -> RateExpression:
    return RateExpression(source=text, ast=_Parser(text).parse())
