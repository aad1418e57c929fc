"""Sparse multivariate polynomials with rational coefficients.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients.  Variable names are not stored here; varieties and the parser
keep the name lists and pass them in when printing.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm

from .rings import QQ

Exp = tuple


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


class MonomialOrder:
    """Total, multiplicative well-orders on exponent tuples.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"block"``.  A block order
    compares the first ``block`` exponents by grevlex and breaks ties with
    grevlex on the rest, which makes it an elimination order for the first
    block.
    """

    __slots__ = ("kind", "block", "key")

    def __init__(self, kind="grevlex", block=0):
        if kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.block = block if kind == "block" else 0
        if kind == "grevlex":
            self.key = grevlex_key
        elif kind == "lex":
            self.key = tuple
        else:
            k = block
            self.key = lambda e: (grevlex_key(e[:k]), grevlex_key(e[k:]))

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder)
                and (self.kind, self.block) == (other.kind, other.block))

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', {self.block})"
        return f"MonomialOrder({self.kind!r})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(k):
    return MonomialOrder("block", k)


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        if terms is None:
            terms = {}
        else:
            terms = {tuple(e): Fraction(c) for e, c in terms.items() if c}
        self.terms = terms
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        # terms must already be clean: tuple keys, nonzero Fraction values
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars, c):
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(len(exp), {tuple(exp): coeff})

    # -- basic queries ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def support(self):
        """Indices of variables that occur."""
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def leading(self, order):
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def sorted_terms(self, order=GREVLEX):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]),
                      reverse=True)

    def denominator_lcm(self):
        return lcm(1, *(c.denominator for c in self.terms.values()))

    def monic(self, order):
        if not self.terms:
            return self
        _, c = self.leading(order)
        return self.scale(1 / c)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return Poly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_exp(e1, e2)
                v = t.get(e, 0) + c1 * c2
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return Poly._raw(self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, exp, coeff):
        return Poly._raw(self.nvars, {_add_exp(e, exp): c * coeff
                                      for e, c in self.terms.items()})

    def diff(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly._raw(self.nvars, t)

    # -- substitution and evaluation ---------------------------------------
    def subs(self, values, reduce=None):
        """Substitute polynomials ``values[i]`` for variable ``i``.

        ``reduce`` (optional) is applied to cached powers and the result,
        keeping intermediate sizes down when working modulo an ideal.
        """
        if len(values) != self.nvars:
            raise ValueError("substitution arity mismatch")
        target_n = values[0].nvars if values else 0
        red = reduce or (lambda q: q)
        powers = [{0: Poly.const(target_n, 1), 1: v} for v in values]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                half = power(i, k // 2)
                sq = red(half * half)
                cache[k] = red(sq * values[i]) if k % 2 else sq
            return cache[k]

        acc = {}
        for e, c in self.terms.items():
            term = Poly.const(target_n, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                v = acc.get(te, 0) + tc
                if v:
                    acc[te] = v
                else:
                    acc.pop(te, None)
        return red(Poly._raw(target_n, acc))

    def evaluate(self, point, ring=QQ):
        """Evaluate at ``point`` (a sequence of ``ring`` elements)."""
        if len(point) != self.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, expected {self.nvars}")
        powcache = {}

        def pw(i, k):
            key = (i, k)
            if key not in powcache:
                if k == 1:
                    powcache[key] = point[i]
                else:
                    h = pw(i, k // 2)
                    v = ring.mul(h, h)
                    powcache[key] = ring.mul(v, point[i]) if k % 2 else v
            return powcache[key]

        total = ring.zero
        for e, c in self.terms.items():
            v = ring.from_fraction(c)
            for i, k in enumerate(e):
                if k:
                    v = ring.mul(v, pw(i, k))
            total = ring.add(total, v)
        return total

    def embed(self, nvars, positions):
        """Re-index into a ring with ``nvars`` variables.

        Variable ``i`` of ``self`` becomes variable ``positions[i]``.
        """
        t = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for i, k in enumerate(e):
                ne[positions[i]] += k
            t[tuple(ne)] = c
        return Poly._raw(nvars, t)

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sort_key(self):
        """Deterministic total key, independent of dict insertion order."""
        return tuple((grevlex_key(e), c.numerator, c.denominator)
                     for e, c in self.sorted_terms())

    def to_str(self, names):
        return format_poly(self, names)

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Poly({format_poly(self, names)!r})"


def format_poly(p, names, order=GREVLEX):
    """Render in the input grammar, e.g. ``x^2 - 3/2*x*y + 1``."""
    if p.is_zero():
        return "0"
    out = []
    for e, c in p.sorted_terms(order):
        mono = "*".join(n if k == 1 else f"{n}^{k}"
                        for n, k in zip(names, e) if k)
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(out)
