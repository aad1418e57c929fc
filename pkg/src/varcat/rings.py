"""Coefficient rings used for exact polynomial evaluation.

Polynomials in this package always carry rational coefficients; evaluating
one over another ring maps each coefficient through ``from_fraction``.  For
the finite rings this is where a denominator divisible by the characteristic
is rejected.
"""
from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .errors import NonInvertibleDenominator


class RationalField:
    zero = Fraction(0)
    one = Fraction(1)

    def from_fraction(self, c):
        return Fraction(c)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class PrimeField:
    """Integers modulo a prime, elements stored as ints in ``range(p)``."""

    def __init__(self, p: int):
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def from_fraction(self, c):
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise NonInvertibleDenominator(
                f"denominator {c.denominator} not invertible mod {self.p}")
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def __repr__(self):
        return f"GF({self.p})"


class TElt(NamedTuple):
    """Element ``u + sum(b[i] * tau_i)`` of a truncated ring.

    ``u`` lives in Z/p^2, each ``b[i]`` in Z/p.
    """
    u: int
    b: tuple


class TruncatedRing:
    """The finite local ring Z/p^2 + F_p tau_1 + ... + F_p tau_e.

    Multiplication: tau_i tau_j = 0 and p tau_i = 0, so
    (u + b.tau)(u' + b'.tau) = uu' + (u mod p) b' + (u' mod p) b.
    This is the ring O/m^2 of a smooth closed point with residue field F_p on
    a flat integral model whose fibre has dimension e.
    """

    def __init__(self, p: int, e: int):
        self.p = p
        self.e = e
        self.q = p * p
        self.zero = TElt(0, (0,) * e)
        self.one = TElt(1, (0,) * e)

    @property
    def size(self) -> int:
        return self.q * self.p ** self.e

    def tau(self, i: int) -> TElt:
        b = [0] * self.e
        b[i] = 1
        return TElt(0, tuple(b))

    def element(self, u, b=()):
        b = tuple(x % self.p for x in b) + (0,) * (self.e - len(b))
        return TElt(u % self.q, b)

    def from_fraction(self, c):
        c = Fraction(c)
        if c.denominator % self.p == 0:
            raise NonInvertibleDenominator(
                f"denominator {c.denominator} not invertible mod {self.q}")
        return TElt(c.numerator * pow(c.denominator, -1, self.q) % self.q,
                    self.zero.b)

    def add(self, x, y):
        p = self.p
        return TElt((x.u + y.u) % self.q,
                    tuple((s + t) % p for s, t in zip(x.b, y.b)))

    def mul(self, x, y):
        p = self.p
        xu, yu = x.u % p, y.u % p
        return TElt(x.u * y.u % self.q,
                    tuple((xu * t + yu * s) % p for s, t in zip(x.b, y.b)))

    def encode(self, x: TElt) -> int:
        """Bijection of the ring onto ``range(self.size)``."""
        code = x.u
        scale = self.q
        for bi in x.b:
            code += bi * scale
            scale *= self.p
        return code

    def decode(self, code: int) -> TElt:
        u = code % self.q
        code //= self.q
        b = []
        for _ in range(self.e):
            b.append(code % self.p)
            code //= self.p
        return TElt(u, tuple(b))

    def __repr__(self):
        return f"TruncatedRing(p={self.p}, e={self.e})"
