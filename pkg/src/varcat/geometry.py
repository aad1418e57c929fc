"""Affine varieties over Q and polynomial morphisms in canonical form."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from .errors import (ImproperIdeal, NotWellDefined, PowerBudgetExceeded,
                     SourceTargetMismatch)
from .groebner import Ideal, dimension, elimination_ideal
from .poly import GREVLEX, Poly, format_poly


class Variety:
    """An affine variety V(I) in the named ambient coordinates.

    Irreducibility of ``I`` over Q is assumed, not checked.  Properness is
    checked on construction.  Two varieties compare equal when they have the
    same coordinate names and the same reduced grevlex basis; the display
    name is ignored.
    """

    assumed_irreducible = True

    def __init__(self, name, variables, generators=(), ideal=None):
        self.name = name
        self.vars = tuple(variables)
        self.ideal = ideal if ideal is not None else Ideal(self.vars, generators)
        if self.ideal.vars != self.vars:
            raise ValueError("ideal lives in different coordinates")
        if not self.ideal.is_proper():
            raise ImproperIdeal(f"variety {name!r} is empty (1 lies in its ideal)")

    @classmethod
    def affine_space(cls, name, variables):
        return cls(name, variables)

    @property
    def nvars(self):
        return len(self.vars)

    @property
    def gb(self):
        return self.ideal.groebner(GREVLEX)

    @cached_property
    def dim(self):
        return dimension(self.ideal)

    @cached_property
    def key(self):
        return (self.vars, self.gb.elements)

    def reduce(self, p):
        return self.gb.reduce(p)

    def contains_poly(self, p):
        """True iff ``p`` vanishes on the variety."""
        return self.gb.contains(p)

    def coordinate(self, i):
        return self.reduce(Poly.var(self.nvars, i))

    def generators_str(self):
        return [format_poly(g, self.vars) for g in self.gb.elements]

    def __eq__(self, other):
        return isinstance(other, Variety) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        gens = ", ".join(self.generators_str())
        return f"Variety({self.name!r}, {list(self.vars)}, [{gens}])"


class Morphism:
    """A polynomial map ``source -> target`` with canonical coordinates.

    Each coordinate is stored as its normal form modulo the source ideal, so
    structural equality of morphisms is equality of maps.
    """

    __slots__ = ("source", "target", "coords", "_hash")

    def __init__(self, source, target, coords, check=True):
        coords = tuple(coords)
        if len(coords) != target.nvars:
            raise NotWellDefined(
                f"{len(coords)} coordinates given, target has {target.nvars}")
        for c in coords:
            if c.nvars != source.nvars:
                raise NotWellDefined("coordinate in the wrong number of variables")
        self.source = source
        self.target = target
        self.coords = tuple(source.reduce(c) for c in coords)
        self._hash = None
        if check:
            bad = self.first_violation()
            if bad is not None:
                raise NotWellDefined(
                    f"target equation {format_poly(bad, target.vars)} does not "
                    f"vanish on {source.name} after substitution")

    def first_violation(self):
        for g in self.target.gb.elements:
            if not self.source.reduce(g.subs(self.coords, self.source.reduce)).is_zero():
                return g
        return None

    @classmethod
    def identity(cls, v):
        return cls(v, v, [v.coordinate(i) for i in range(v.nvars)], check=False)

    def is_endo(self):
        return self.source == self.target

    def is_identity(self):
        return self.is_endo() and self == Morphism.identity(self.source)

    def term_count(self):
        return sum(len(c.terms) for c in self.coords)

    def denominator_lcm(self):
        return lcm(1, *(c.denominator_lcm() for c in self.coords))

    def apply(self, point, ring=None):
        if ring is None:
            return tuple(c.evaluate(point) for c in self.coords)
        return tuple(c.evaluate(point, ring) for c in self.coords)

    def coords_str(self):
        return [format_poly(c, self.source.vars) for c in self.coords]

    @property
    def key(self):
        return (self.source.key, self.target.key, self.coords)

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self):
        return (f"Morphism({self.source.name} -> {self.target.name}: "
                f"({', '.join(self.coords_str())}))")


def compose(f, g):
    """The morphism ``f o g`` (first ``g``, then ``f``)."""
    if g.target != f.source:
        raise SourceTargetMismatch(
            f"cannot compose: {g.target.name} is not {f.source.name}")
    red = g.source.reduce
    coords = [c.subs(g.coords, red) for c in f.coords]
    return Morphism(g.source, f.target, coords, check=False)


def power(f, k, term_cap=None):
    """``f`` composed with itself ``k`` times, by repeated squaring."""
    result = Morphism.identity(f.source)
    base = f
    while k:
        if k & 1:
            result = compose(base, result)
            _check_cap(result, term_cap)
        k >>= 1
        if k:
            base = compose(base, base)
            _check_cap(base, term_cap)
    return result


def _check_cap(m, cap):
    if cap is not None and m.term_count() > cap:
        raise PowerBudgetExceeded(
            f"iterate has {m.term_count()} terms, cap is {cap}")


def graph_ideal(f):
    """Ideal of the graph of ``f`` in source x target coordinates.

    Source coordinates come first; they are renamed apart when the two
    ambient name lists clash.
    """
    n, m = f.source.nvars, f.target.nvars
    src_names = [f"{v}'" if v in f.target.vars else v for v in f.source.vars]
    names = src_names + list(f.target.vars)
    gens = [g.embed(n + m, list(range(n))) for g in f.source.ideal.generators]
    for j, c in enumerate(f.coords):
        gens.append(Poly.var(n + m, n + j) - c.embed(n + m, list(range(n))))
    return Ideal(names, gens)


def image_closure(f, name=None):
    """Zariski closure of the image of ``f``, inside the target ambient."""
    gi = graph_ideal(f)
    elim = elimination_ideal(gi, range(f.source.nvars))
    ideal = Ideal(f.target.vars, elim.generators)
    return Variety(name or f"im({f.source.name}->{f.target.name})",
                   f.target.vars, ideal=ideal)


def is_dominant(f):
    z = image_closure(f)
    return all(f.target.contains_poly(g) for g in z.gb.elements)


def restrict_to(f, z, target=None):
    """Restrict ``f`` to the subvariety ``z`` of its source.

    ``target`` defaults to ``z`` for endomorphisms and to ``f.target``
    otherwise.  Raises ``NotWellDefined`` unless ``f`` maps ``z`` into it.
    """
    if z.vars != f.source.vars:
        raise NotWellDefined(f"{z.name} is not in the ambient of {f.source.name}")
    if target is None:
        target = z if f.is_endo() else f.target
    return Morphism(z, target, f.coords, check=True)


@dataclass
class IntegralModel:
    """Spreading out over Z[1/D].

    ``D`` is the lcm of every basis denominator and every morphism
    coefficient denominator in scope.  ``scaled`` holds, per variety, the
    reduced basis cleared to primitive integer polynomials.
    """
    D: int
    scaled: dict = field(default_factory=dict)

    def admits(self, p):
        return self.D % p != 0


def primitive_integer(p):
    """Scale ``p`` to an integer polynomial with content 1."""
    d = p.denominator_lcm()
    q = p.scale(d)
    g = 0
    for c in q.terms.values():
        g = gcd(g, c.numerator)
    return q.scale(Fraction(1, g)) if g > 1 else q


def spread_out(varieties=(), morphisms=()):
    D = 1
    scaled = {}
    for v in varieties:
        D = lcm(D, v.gb.denominator_lcm)
        scaled[v] = tuple(primitive_integer(g) for g in v.gb.elements)
    for f in morphisms:
        for v in (f.source, f.target):
            if v not in scaled:
                D = lcm(D, v.gb.denominator_lcm)
                scaled[v] = tuple(primitive_integer(g) for g in v.gb.elements)
        D = lcm(D, f.denominator_lcm())
    return IntegralModel(D, scaled)
