"""Recursive-descent parser for polynomial input.

Grammar (whitespace is ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | 'x' | 'y' | '(' expr ')'

``p/q`` rational literals fall out of the ``/`` rule; division is only
allowed by a nonzero constant.  Implicit multiplication (``2x``) is a
syntax error.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .poly import BivarPoly, X, Y

__all__ = ["PolySyntaxError", "parse_poly"]

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?(?:[eE][-+]?\d+)?)|([A-Za-z_]\w*)|(\S))")


class PolySyntaxError(ValueError):
    """Raised for malformed input; ``position`` is a 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        number, name, sym = m.groups()
        start = m.start(m.lastindex)
        if number is not None:
            if not number.isdigit():
                raise PolySyntaxError(f"non-rational literal {number!r}", start)
            tokens.append(("num", int(number), start))
        elif name is not None:
            if name not in ("x", "y"):
                raise PolySyntaxError(f"unknown variable {name!r}", start)
            tokens.append(("var", name, start))
        else:
            if sym not in "+-*/^()":
                raise PolySyntaxError(f"unexpected character {sym!r}", start)
            tokens.append(("op", sym, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, op):
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def expect(self, op):
        if not self.accept(op):
            kind, value, pos = self.peek()
            found = "end of input" if kind == "end" else repr(value)
            raise PolySyntaxError(f"expected {op!r}, found {found}", pos)

    def parse(self):
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise PolySyntaxError(f"unexpected {value!r}", pos)
        return result

    def expr(self):
        value = self.term()
        while True:
            if self.accept("+"):
                value = value + self.term()
            elif self.accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.unary()
        while True:
            if self.accept("*"):
                value = value * self.unary()
            elif self.peek()[:2] == ("op", "/"):
                pos = self.take()[2]
                divisor = self.unary()
                if not divisor.is_constant() or divisor.is_zero():
                    raise PolySyntaxError("division only by a nonzero constant", pos)
                value = value / divisor
            else:
                kind, _, pos = self.peek()
                if kind in ("num", "var") or self.peek()[:2] == ("op", "("):
                    raise PolySyntaxError("implicit multiplication is not allowed", pos)
                return value

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            kind, value, pos = self.take()
            if kind != "num":
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            base = base**value
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return BivarPoly.const(Fraction(value))
        if kind == "var":
            return X if value == "x" else Y
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(value)
        raise PolySyntaxError(f"unexpected {found}", pos)


def parse_poly(text: str) -> BivarPoly:
    """Parse ``text`` into an exact rational :class:`BivarPoly`."""
    return _Parser(text).parse()
