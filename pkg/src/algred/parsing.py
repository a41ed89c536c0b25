"""Recursive-descent parser for the ASCII polynomial expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'i' | 'hbar' | IDENT | '(' expr ')'

Division is only allowed by a nonzero constant, which covers rational
literals such as ``1/2`` and forms like ``p^2/2``.
"""

from __future__ import annotations

import re
from typing import List, Sequence, Tuple

from .poly import Poly
from .scalars import HBAR, I, Scalar

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
RESERVED = ("i", "hbar")


class ExpressionError(ValueError):
    """Syntax or semantic error in an expression; ``pos`` is a 0-based column."""

    def __init__(self, msg: str, text: str, pos: int):
        self.msg = msg
        self.text = text
        self.pos = pos
        super().__init__(f"{msg} at column {pos + 1}: {text!r}")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ExpressionError(f"unexpected character {ch!r}", text, m.start(3))
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vars: Sequence[str]):
        self.text = text
        self.vars = tuple(vars)
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(msg, self.text, tok[2])

    def expect(self, value):
        t = self.peek()
        if t[1] != value or t[0] not in ("op",):
            self.error(f"expected {value!r}")
        return self.take()

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.error("empty expression")
        out = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return out

    def expr(self) -> Poly:
        out = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> Poly:
        out = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                out = out * rhs
            else:
                if not rhs.is_constant():
                    self.error("division by a non-constant expression", tok)
                c = rhs.constant()
                if not c:
                    self.error("division by zero", tok)
                if not c.is_unit():
                    self.error("division by an hbar-dependent constant", tok)
                out = out.scale(c.inverse())
        return out

    def unary(self) -> Poly:
        t = self.peek()
        if t[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if t[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.peek()
            if t[:2] == ("op", "-"):
                self.error("negative exponent")
            if t[0] != "int":
                self.error("exponent must be a nonnegative integer literal")
            self.take()
            return base ** int(t[1])
        return base

    def atom(self) -> Poly:
        t = self.take()
        kind, val, _ = t
        if kind == "int":
            return Poly.const(self.vars, int(val))
        if kind == "name":
            if val == "i":
                return Poly.const(self.vars, I)
            if val == "hbar":
                return Poly.const(self.vars, HBAR)
            if val not in self.vars:
                self.i -= 1
                self.error(f"unknown identifier {val!r}")
            return Poly.var(self.vars, val)
        if (kind, val) == ("op", "("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.i -= 1
        if kind == "end":
            self.error("unexpected end of expression")
        self.error(f"unexpected token {val!r}")


def parse_poly(text: str, vars: Sequence[str]) -> Poly:
    """Parse ``text`` into a canonical :class:`Poly` over ``vars``."""
    bad = [v for v in vars if v in RESERVED]
    if bad:
        raise ValueError(f"reserved name used as variable: {bad}")
    return _Parser(text, vars).parse()


def parse_scalar(text: str) -> Scalar:
    """Parse a constant expression (no variables)."""
    p = parse_poly(text, ())
    return p.constant()
