"""Recursive-descent parser for polynomial relation strings.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := atom ('^' power)?          # right-associative
    atom    := INTEGER | NAME | '(' expr ')'

Exponents must evaluate to non-negative integer constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from .poly import Poly


class ParseError(ValueError):
    pass


class PolySyntaxError(ParseError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownVariable(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown variable {name!r} at offset {offset}")
        self.name = name
        self.offset = offset


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - *
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"


Node = Union[Int, Var, Neg, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^()]))")


def _tokenize(src: str) -> List[Tuple[str, str, int]]:
    text = src
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            # report byte offsets, not code-point offsets
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolySyntaxError(f"unexpected character {text[bad]!r}", len(text[:bad].encode("utf-8")))
        kind = m.lastgroup
        start = len(text[:m.start(kind)].encode("utf-8"))
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, src: str, names: Sequence[str]):
        self.tokens = _tokenize(src)
        self.pos = 0
        self.names = set(names)

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, text, off = self.take()
        if text != value or kind != "op":
            raise PolySyntaxError(f"expected {value!r}", off)

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[:2] == ("op", "*"):
            self.take()
            node = BinOp("*", node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            off = self.peek()[2]
            exponent = self.power()
            value = _constant_value(exponent)
            if value is None or value < 0:
                raise PolySyntaxError("exponent must be a non-negative integer constant", off)
            return Pow(base, exponent)
        return base

    def atom(self) -> Node:
        kind, text, off = self.take()
        if kind == "int":
            return Int(int(text))
        if kind == "name":
            if text not in self.names:
                raise UnknownVariable(text, off)
            return Var(text)
        if (kind, text) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", off)
        raise PolySyntaxError(f"unexpected token {text!r}", off)


def _constant_value(node: Node):
    if isinstance(node, Int):
        return node.value
    if isinstance(node, Pow):
        b = _constant_value(node.base)
        e = _constant_value(node.exponent)
        return None if b is None or e is None else b ** e
    return None


def parse_poly(src: str, names: Sequence[str]) -> Node:
    """Parse ``src`` into an expression tree over the variables ``names``."""
    p = _Parser(src, names)
    node = p.expr()
    kind, text, off = p.peek()
    if kind != "end":
        raise PolySyntaxError(f"unexpected token {text!r}", off)
    return node


def to_poly(node: Node, names: Sequence[str]) -> Poly:
    """Expand an expression tree into a :class:`Poly` over ``names``."""
    g = len(names)
    index = {n: i for i, n in enumerate(names)}

    def ev(n: Node) -> Poly:
        if isinstance(n, Int):
            return Poly.constant(g, n.value)
        if isinstance(n, Var):
            return Poly.variable(g, index[n.name])
        if isinstance(n, Neg):
            return -ev(n.operand)
        if isinstance(n, Pow):
            return ev(n.base) ** _constant_value(n.exponent)
        left, right = ev(n.left), ev(n.right)
        if n.op == "+":
            return left + right
        if n.op == "-":
            return left - right
        return left * right

    return ev(node)


_PREC = {"+": 1, "-": 1, "*": 2}


def format_expr(node: Node) -> str:
    """Render a tree back to source text that parses to an equal tree."""

    def fmt(n: Node, ctx: int) -> str:
        # ctx: binding strength required by the parent (0 loose .. 5 atom)
        if isinstance(n, Int):
            return str(n.value)
        if isinstance(n, Var):
            return n.name
        if isinstance(n, Neg):
            s = "-" + fmt(n.operand, 3)
            return s if ctx <= 3 else f"({s})"
        if isinstance(n, Pow):
            s = fmt(n.base, 5) + "^" + fmt(n.exponent, 4)
            return s if ctx <= 4 else f"({s})"
        p = _PREC[n.op]
        if n.op == "*":
            s = fmt(n.left, 2) + " * " + fmt(n.right, 3)
        else:
            s = fmt(n.left, 1) + f" {n.op} " + fmt(n.right, 2)
        return s if ctx <= p else f"({s})"

    return fmt(node, 0)
