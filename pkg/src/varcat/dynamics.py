"""Orbits of finitely generated monoids acting on affine varieties.

Everything is exact: points are tuples of ``Fraction``.  Nothing here proves
an orbit infinite; budgets run out and the result says so.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .decider import word_str
from .errors import IncompleteOrbit, NotWellDefined, PointNotOnVariety
from .geometry import Morphism, compose, restrict_to
from .quiver import Arrow, System


def as_point(values):
    return tuple(Fraction(v) for v in values)


@dataclass
class MonoidAction:
    variety: object
    generators: list
    point: tuple
    names: list = None

    def __post_init__(self):
        self.point = as_point(self.point)
        if len(self.point) != self.variety.nvars:
            raise PointNotOnVariety("base point has the wrong number of coordinates")
        for g in self.variety.gb.elements:
            if g.evaluate(self.point) != 0:
                raise PointNotOnVariety(f"base point is not on {self.variety.name}")
        for f in self.generators:
            if f.source != self.variety or f.target != self.variety:
                raise NotWellDefined("generators must be endomorphisms of the variety")
        if self.names is None:
            self.names = [f"f{i}" for i in range(len(self.generators))]


@dataclass
class OrbitReport:
    points: list
    transitions: list  # one dict per generator: point -> image
    complete: bool
    budget_used: int

    @property
    def size(self):
        return len(self.points)


def orbit_bfs(action, budget=10_000):
    """Breadth-first orbit of the base point, at most ``budget`` points."""
    start = action.point
    points, seen = [start], {start}
    trans = [dict() for _ in action.generators]
    head = 0
    while head < len(points):
        x = points[head]
        head += 1
        for k, f in enumerate(action.generators):
            y = f.apply(x)
            trans[k][x] = y
            if y not in seen:
                if len(points) >= budget:
                    return OrbitReport(points, trans, False, len(points))
                seen.add(y)
                points.append(y)
    return OrbitReport(points, trans, True, len(points))


@dataclass
class Periodic:
    period: int
    status = "periodic"


@dataclass
class Preperiodic:
    tail: int
    period: int
    status = "preperiodic"


@dataclass
class Unresolved:
    steps: int
    status = "unresolved"


def cyclic_periodicity(f, x, budget=10_000):
    """Classify the forward orbit of ``x`` under ``f`` by cycle detection."""
    x = as_point(x)
    first = {x: 0}
    cur = x
    for step in range(1, budget + 1):
        cur = f.apply(cur)
        if cur in first:
            tail = first[cur]
            period = step - tail
            return Periodic(period) if tail == 0 else Preperiodic(tail, period)
        first[cur] = step
    return Unresolved(budget)


def m_periodicity(report):
    """True iff every generator permutes the (complete) orbit."""
    if not report.complete:
        raise IncompleteOrbit("orbit did not stabilise within its budget")
    n = len(report.points)
    return all(len(set(t.values())) == n and len(t) == n
               for t in report.transitions)


def cyclic_orbit_size(f, x, budget):
    """|<f>.x| counted exactly, or None once ``budget`` points are exceeded."""
    seen = {x}
    cur = x
    while True:
        cur = f.apply(cur)
        if cur in seen:
            return len(seen)
        if len(seen) >= budget:
            return None
        seen.add(cur)


@dataclass
class PairProbeReport:
    words: list
    max_cyclic: int
    max_pair: int
    cyclic_witnesses: list = field(default_factory=list)
    pair_witnesses: list = field(default_factory=list)
    orbit_complete: bool = True
    consistent: bool = True


def monoid_words(action, radius):
    """Distinct monoid elements spelled by words of length <= ``radius``.

    Returns ``(word, morphism)`` pairs, shortest words first; words with the
    same canonical morphism are kept once.
    """
    ident = Morphism.identity(action.variety)
    out = [((), ident)]
    seen = {ident}
    frontier = [((), ident)]
    for _ in range(radius):
        nxt = []
        for word, m in frontier:
            for name, g in zip(action.names, action.generators):
                h = compose(g, m)
                if h not in seen:
                    seen.add(h)
                    nxt.append((word + (name,), h))
        out.extend(nxt)
        frontier = nxt
    return out


def pair_criterion_probe(action, radius=4, budget=200, orbit_budget=10_000):
    """Empirical check of the pair and cyclic orbit criteria.

    For all monoid elements f, g of word length <= ``radius`` this measures
    |<f>.g(x)| and the orbit of x under the submonoid generated by f and g,
    each with ``budget`` points.  ``consistent`` records whether "some
    measured orbit is unbounded" agrees with "the full orbit did not
    stabilise within ``orbit_budget``".
    """
    elems = monoid_words(action, radius)
    x = action.point
    max_cyclic = max_pair = 1
    cyc_w, pair_w = [], []
    for (wf, f), (wg, g) in product(elems, elems):
        size = cyclic_orbit_size(f, g.apply(x), budget)
        if size is None:
            cyc_w.append((word_str(wf), word_str(wg)))
        else:
            max_cyclic = max(max_cyclic, size)
    for i, (wf, f) in enumerate(elems):
        for wg, g in elems[i:]:
            sub = MonoidAction(action.variety, [f, g], x, [word_str(wf), word_str(wg)])
            rep = orbit_bfs(sub, budget)
            if rep.complete:
                max_pair = max(max_pair, rep.size)
            else:
                pair_w.append((word_str(wf), word_str(wg)))
    full = orbit_bfs(action, orbit_budget)
    unbounded = bool(cyc_w or pair_w)
    return PairProbeReport([word_str(w) for w, _ in elems], max_cyclic, max_pair,
                           cyc_w, pair_w, full.complete,
                           consistent=(unbounded != full.complete))


def component_system(action, components):
    """System on user-supplied components of an orbit closure.

    ``components`` are varieties in the ambient of ``action.variety``.  Each
    generator restricted to a component must land in one of them; the arrows
    are those restrictions.  Finding the components is left to the caller.
    """
    arrows = []
    for name, f in zip(action.names, action.generators):
        for i, z in enumerate(components):
            for j, w in enumerate(components):
                try:
                    r = restrict_to(f, z, w)
                except NotWellDefined:
                    continue
                arrows.append(Arrow(f"{name}|{i}", i, j, r))
                break
            else:
                raise NotWellDefined(f"{name} maps {z.name} into no listed component")
    return System(components, arrows, label="orbit-components")
