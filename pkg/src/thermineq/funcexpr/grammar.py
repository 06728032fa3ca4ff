"""Expression grammar: tokenizer, recursive-descent parser, printer, compiler.

The language is small on purpose. Expressions are built from decimal
numbers, the single variable `x`, the operators + - * / ^ (with ^ binding
tightest and associating right), parentheses, and calls to exp, log, sqrt
and abs. Anything else is a parse error that reports where it happened.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from . import jets

FUNCTIONS = frozenset({"exp", "log", "sqrt", "abs"})

_TOKEN = re.compile(
    r"(?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[+\-*/^()])"
)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Binary:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


def tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        tokens.append((kind, m.group(), i))
        i = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, text, at = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", at)
        self.advance()

    def parse(self):
        node = self.expr()
        kind, text, at = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected trailing input {text!r}", at)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Binary(text, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Binary(text, node, self.unary())
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            # Right associative, and the exponent may carry a sign: x^-2.
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        kind, text, at = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ParseError(f"unknown identifier {text!r}", at)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", at)
        raise ParseError(f"unexpected token {text!r}", at)


def parse(text: str):
    """Parse expression text into an AST."""
    return _Parser(text).parse()


def to_text(node) -> str:
    """Render an AST back to parseable text, fully parenthesized."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, Binary):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


_CALLS = {"exp": jets.exp, "log": jets.log, "sqrt": jets.sqrt, "abs": abs}


def compile_node(node):
    """Build a closure evaluating the AST at a float, array or Jet argument."""
    if isinstance(node, Num):
        c = node.value
        return lambda x: c
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        f = compile_node(node.operand)
        return lambda x: -f(x)
    if isinstance(node, Binary):
        lf = compile_node(node.left)
        rf = compile_node(node.right)
        op = node.op
        if op == "+":
            return lambda x: lf(x) + rf(x)
        if op == "-":
            return lambda x: lf(x) - rf(x)
        if op == "*":
            return lambda x: lf(x) * rf(x)
        if op == "/":
            return lambda x: lf(x) / rf(x)
        if op == "^":
            return lambda x: jets.power(lf(x), rf(x))
        raise TypeError(f"not an operator: {op!r}")
    if isinstance(node, Call):
        f = compile_node(node.arg)
        fn = _CALLS[node.name]
        return lambda x: fn(f(x))
    raise TypeError(f"not an expression node: {node!r}")
