"""Recursive-descent parser for polynomial strings.

Grammar (whitespace is insignificant)::

    expr     := sign? term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := rational | identifier ('^' natural)? | '(' expr ')' ('^' natural)?
    rational := integer ('/' positive-integer)?

The optional leading sign and the power on a parenthesised group extend
the bare grammar so that printed polynomials (``-x^2 + 1``) parse back.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, UnknownVariable
from .poly import Poly

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S)")


def tokenize(text):
    tokens = []
    for m in _TOKEN.finditer(text):
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), m.start()))
        elif ident is not None:
            tokens.append(("id", ident, m.start()))
        elif op in "+-*/^()":
            tokens.append(("op", op, m.start()))
        else:
            raise ParseError(f"unexpected character {op!r}", m.start())
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables):
        self.toks = tokenize(text)
        self.i = 0
        self.vars = {v: k for k, v in enumerate(variables)}
        self.n = len(variables)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", pos)

    def natural(self):
        kind, val, pos = self.take()
        if kind != "num":
            raise ParseError("expected a natural number exponent", pos)
        return val

    def expr(self):
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self):
        acc = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self):
        kind, val, pos = self.take()
        if kind == "num":
            c = Fraction(val)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                k2, den, p2 = self.take()
                if k2 != "num" or den == 0:
                    raise ParseError("expected a positive integer denominator", p2)
                c = Fraction(val, den)
            return Poly.const(self.n, c)
        if kind == "id":
            if val not in self.vars:
                raise UnknownVariable(val, pos)
            base = Poly.var(self.n, self.vars[val])
            return self._maybe_power(base)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return self._maybe_power(inner)
        raise ParseError("expected a number, variable or '('", pos)

    def _maybe_power(self, base):
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return base ** self.natural()
        return base


def parse_polynomial(text, variables):
    """Parse ``text`` into a ``Poly`` over the named variables."""
    if not isinstance(text, str):
        text = str(text)
    p = _Parser(text, list(variables))
    result = p.expr()
    kind, _, pos = p.peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", pos)
    return result


def parse_rational(text):
    """A single rational constant such as ``-3/2``."""
    p = parse_polynomial(text, [])
    return p.constant_term()
