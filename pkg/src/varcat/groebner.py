"""Buchberger's algorithm, normal forms, elimination and Krull dimension."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from math import lcm

from .errors import ImproperIdeal
from .poly import GREVLEX, MonomialOrder, Poly, _divides, block_order


def _lcm_exp(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _reduce_terms(terms, basis, leads, order):
    """Remainder of a term dict on division by a monic basis."""
    f = dict(terms)
    rem = {}
    key = order.key
    while f:
        m = max(f, key=key)
        c = f[m]
        for g, lm in zip(basis, leads):
            if _divides(lm, m):
                q = tuple(x - y for x, y in zip(m, lm))
                for e, gc in g.terms.items():
                    ne = tuple(x + y for x, y in zip(e, q))
                    v = f.get(ne, 0) - c * gc
                    if v:
                        f[ne] = v
                    else:
                        f.pop(ne, None)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


@dataclass(frozen=True)
class GroebnerBasis:
    order: MonomialOrder
    elements: tuple
    leads: tuple
    denominator_lcm: int

    @property
    def nvars(self):
        return self.elements[0].nvars if self.elements else None

    def is_unit(self):
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def reduce(self, p):
        if not self.elements or p.is_zero():
            return p
        rem = _reduce_terms(p.terms, self.elements, self.leads, self.order)
        return Poly._raw(p.nvars, rem)

    def contains(self, p):
        return self.reduce(p).is_zero()

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def normal_form(p, basis):
    """Remainder of ``p`` on division by a Groebner basis."""
    return basis.reduce(p)


def _spoly(f, g, lf, lg):
    m = _lcm_exp(lf, lg)
    qf = tuple(x - y for x, y in zip(m, lf))
    qg = tuple(x - y for x, y in zip(m, lg))
    return f.mul_term(qf, 1) - g.mul_term(qg, 1)


def buchberger(generators, order=GREVLEX):
    """Reduced Groebner basis of the ideal spanned by ``generators``.

    Pairs are selected by sugar degree, ties broken by the lcm of leading
    monomials and then by index.  The product criterion and Buchberger's
    chain criterion discard redundant pairs.  Output elements are monic and
    sorted by decreasing leading monomial, so the result depends only on the
    ideal and the order.
    """
    gens = [g for g in generators if not g.is_zero()]
    if not gens:
        return GroebnerBasis(order, (), (), 1)
    key = order.key
    nvars = gens[0].nvars

    G, L, sugar = [], [], []
    pairs = {}

    def add(h, s):
        h = h.monic(order)
        lh = h.leading(order)[0]
        k = len(G)
        G.append(h)
        L.append(lh)
        sugar.append(s)
        for i in range(k):
            lc = _lcm_exp(L[i], lh)
            ps = max(sugar[i] + sum(lc) - sum(L[i]), s + sum(lc) - sum(lh))
            pairs[(i, k)] = (ps, lc)

    # interreduce the input deterministically before starting
    start = sorted(gens, key=lambda g: key(g.leading(order)[0]))
    for g in start:
        r = _reduce_terms(g.terms, G, L, order)
        if r:
            add(Poly._raw(nvars, r), g.degree())

    while pairs:
        (i, j), (s, lc) = min(pairs.items(),
                              key=lambda kv: (kv[1][0], key(kv[1][1]), kv[0]))
        del pairs[(i, j)]
        li, lj = L[i], L[j]
        if all(not (a and b) for a, b in zip(li, lj)):
            continue
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if (_divides(L[k], lc)
                    and (min(i, k), max(i, k)) not in pairs
                    and (min(j, k), max(j, k)) not in pairs):
                skip = True
                break
        if skip:
            continue
        sp = _spoly(G[i], G[j], li, lj)
        r = _reduce_terms(sp.terms, G, L, order)
        if r:
            add(Poly._raw(nvars, r), s)
            if G[-1].is_constant():
                break

    # minimal basis, then full interreduction
    idx = [k for k in range(len(G))
           if not any(_divides(L[m], L[k]) and (L[m] != L[k] or m < k)
                      for m in range(len(G)) if m != k)]
    minimal = [G[k] for k in idx]
    mleads = [L[k] for k in idx]
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1:]
        oleads = mleads[:k] + mleads[k + 1:]
        r = _reduce_terms(g.terms, others, oleads, order)
        reduced.append(Poly._raw(nvars, r).monic(order))
    reduced.sort(key=lambda g: key(g.leading(order)[0]), reverse=True)
    leads = tuple(g.leading(order)[0] for g in reduced)
    dl = lcm(1, *(g.denominator_lcm() for g in reduced))
    return GroebnerBasis(order, tuple(reduced), leads, dl)


class Ideal:
    """An ideal of Q[vars] given by generators, with cached Groebner bases."""

    def __init__(self, variables, generators=()):
        self.vars = tuple(variables)
        n = len(self.vars)
        gens = []
        for g in generators:
            if g.nvars != n:
                raise ValueError(
                    f"generator has {g.nvars} variables, ideal has {n}")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._cache = {}
        self._lock = threading.Lock()

    @property
    def nvars(self):
        return len(self.vars)

    def groebner(self, order=GREVLEX):
        with self._lock:
            gb = self._cache.get(order)
            if gb is None:
                gb = buchberger(self.generators, order)
                self._cache[order] = gb
            return gb

    def contains(self, p):
        return ideal_membership(p, self)

    def is_proper(self):
        return not self.groebner().is_unit()

    def __repr__(self):
        from .poly import format_poly
        gens = ", ".join(format_poly(g, self.vars) for g in self.generators)
        return f"Ideal({list(self.vars)}, [{gens}])"


def ideal_membership(p, ideal):
    return ideal.groebner().contains(p)


def elimination_ideal(ideal, eliminate):
    """Generators of ``ideal`` intersected with Q[remaining variables].

    ``eliminate`` is a collection of variable names or indices.  The result
    is an ``Ideal`` in the remaining variables, listed in their original
    order, generated by the block-order basis elements free of the
    eliminated variables (which form a Groebner basis of the intersection).
    """
    names = ideal.vars
    elim = {names.index(v) if isinstance(v, str) else v for v in eliminate}
    keep = [i for i in range(len(names)) if i not in elim]
    elim_sorted = sorted(elim)
    perm = elim_sorted + keep
    pos = {old: new for new, old in enumerate(perm)}
    n = len(names)
    moved = [g.embed(n, [pos[i] for i in range(n)]) for g in ideal.generators]
    gb = buchberger(moved, block_order(len(elim_sorted)))
    k = len(elim_sorted)
    out = []
    for g in gb.elements:
        if any(e[i] for e in g.terms for i in range(k)):
            continue
        out.append(Poly._raw(len(keep), {e[k:]: c for e, c in g.terms.items()}))
    return Ideal([names[i] for i in keep], out)


def independent_sets(leads, nvars):
    """All variable subsets meeting no leading monomial's support."""
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in leads]
    found = []
    for mask in range(1 << nvars):
        s = frozenset(i for i in range(nvars) if mask >> i & 1)
        if not any(sup <= s for sup in supports):
            found.append(s)
    return found


def dimension(ideal):
    """Krull dimension of Q[vars]/ideal."""
    gb = ideal.groebner(GREVLEX)
    if gb.is_unit():
        raise ImproperIdeal("1 lies in the ideal")
    n = ideal.nvars
    if not gb.elements:
        return n
    # search from the largest subsets down; stops at the first hit
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in gb.leads]
    for size in range(n, -1, -1):
        for s in combinations(range(n), size):
            ss = frozenset(s)
            if not any(sup <= ss for sup in supports):
                return size
    return 0  # pragma: no cover - the empty set always qualifies


__all__ = [
    "GroebnerBasis", "Ideal", "buchberger", "normal_form", "ideal_membership",
    "elimination_ideal", "dimension", "independent_sets",
]
