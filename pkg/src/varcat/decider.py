"""Deciding finiteness of the category generated by a system of varieties.

Outline of ``Decider.decide_system``:

* split into path components; the whole category is finite iff every
  component is, and then one closure over the full system finishes the job;
* a component whose arrows are all dominant is closed under composition
  while two hooks watch each new endomorphism: the finite-order test at a
  pair of probes of coprime residue characteristic, and a collision check on
  action pairs.  Either hook firing gives a checkable infinite-order
  element; otherwise the closure stops on its own;
* a component with a non-dominant arrow f: A -> B is split into S' (drop f)
  and S'' (the closure Z of f's image, with arrows (f o g)|_Z for g in
  Hom(B, A) of S').  Both are smaller in (arrow count, max dimension).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace

from .errors import (BudgetExceeded, InternalCapExceeded, InvalidWitness,
                     NotWellDefined, SourceTargetMismatch, VarcatError)
from .geometry import (Morphism, compose, image_closure, is_dominant, power,
                       restrict_to, spread_out)
from .probes import (InfiniteOrder, ProbePair, find_probe_pair,
                     finite_order_test, is_bijective, permutation_order,
                     probe_at)
from .quiver import Arrow, Origin, System, bfs_closure, path_components

log = logging.getLogger(__name__)


@dataclass
class DeciderConfig:
    prime_bound: int = 97
    pointset_cap: int = 50_000
    candidate_cap: int = 4_000_000
    power_term_cap: int = 20_000
    dominant_cap: int = 100_000


@dataclass
class Witness:
    """A checkable reason why the generated category is infinite.

    ``word`` (root generator names, application order) spells an
    endomorphism of root vertex ``vertex``; restricted successively to the
    varieties in ``chain`` it becomes ``morphism``, whose infinite order is
    certified by ``certificate``.  For ``KernelCollision`` the certified
    element is h = f o g^(k), built from two distinct finite-order
    endomorphisms with equal action pairs.  ``path`` records the recursion
    steps (outermost first) that led to the subsystem where it was found.
    """
    kind: str
    vertex: int
    chain: tuple
    word: tuple
    morphism: Morphism
    certificate: InfiniteOrder
    collision: dict = None
    path: tuple = ()

    def within(self, step):
        return replace(self, path=(step,) + self.path)


@dataclass
class Finite:
    order: int
    table: object

    finite = True


@dataclass
class Infinite:
    witness: Witness

    finite = False


def word_str(word):
    return "∘".join(reversed(word)) if word else "id"


class Decider:
    def __init__(self, config=None):
        self.config = config or DeciderConfig()
        self.diagnostics = {"scopes": [], "probes": []}
        self._dominant = {}
        self._probe_cache = {}

    # -- helpers ---------------------------------------------------------
    def dominant(self, m):
        if m not in self._dominant:
            self._dominant[m] = is_dominant(m)
        return self._dominant[m]

    def probe_pair(self, variety, model):
        key = (variety, model.D)
        if key not in self._probe_cache:
            c = self.config
            pair = find_probe_pair(variety, model, c.prime_bound,
                                   c.pointset_cap, c.candidate_cap)
            self._probe_cache[key] = pair
            self.diagnostics["probes"].append({
                "variety": variety.name,
                "D": model.D,
                "probes": [pr.describe() for pr in pair]})
        return self._probe_cache[key]

    def _fot(self, m, pair):
        return finite_order_test(m, pair, self.config.power_term_cap,
                                 check_dominant=False)

    # -- the procedure ---------------------------------------------------
    def decide_system(self, system):
        rep = path_components(system)
        comps = rep.component_systems(system)
        log.info("%s: %d path component(s), %d bridge arrow(s)",
                 system.label, len(comps), len(rep.bridges))
        orders = []
        for comp in comps:
            verdict = self.decide_component(comp)
            if not verdict.finite:
                if len(comps) == 1:
                    return verdict
                return Infinite(verdict.witness.within(f"component {comp.label}"))
            orders.append(verdict)
        if len(comps) == 1:
            return orders[0]
        cap = _component_bound(rep, [v.order for v in orders])
        return self._close(system, cap)

    def _close(self, system, cap):
        try:
            table, _ = bfs_closure(system, cap=cap)
        except BudgetExceeded as exc:
            raise InternalCapExceeded(
                f"closure of {system.label} exceeded the proven bound {cap}") from exc
        return Finite(len(table), table)

    def decide_component(self, comp):
        if not comp.arrows:
            return self._close(comp, len(comp.vertices))
        if all(self.dominant(a.morphism) for a in comp.arrows):
            return self.decide_dominant_component(comp)
        f = next(a for a in comp.arrows if not self.dominant(a.morphism))
        log.info("%s: arrow %s is not dominant, splitting", comp.label, f.name)

        s1 = comp.without(f)
        v1 = self.decide_system(s1)
        if not v1.finite:
            return Infinite(v1.witness.within(f"{s1.label} (drop {f.name})"))

        a, b = f.src, f.dst
        z = image_closure(f.morphism, name=f"Z[{f.name}]")
        arrows, seen = [], set()
        for g in v1.table.hom(b, a):
            r = restrict_to(compose(f.morphism, g.morphism), z, z)
            if r in seen:
                continue
            seen.add(r)
            word = v1.table.root_word(g) + f.root_word()
            arrows.append(Arrow(f"{f.name}.{len(arrows)}", 0, 0, r, word))
        origin = comp.origins[b]
        s2 = System([z], arrows, [Origin(origin.root, origin.chain + (z,))],
                    f"{comp.label}|{z.name}")
        log.info("%s: image closure of %s has dim %d < %d, %d arrow(s)",
                 comp.label, f.name, z.dim, comp.vertices[b].dim, len(arrows))
        v2 = self.decide_system(s2)
        if not v2.finite:
            return Infinite(v2.witness.within(f"{s2.label} (image of {f.name})"))

        n = len(comp.vertices)
        cap = v1.order
        for v in range(n):
            into_a = len(v1.table.hom(v, a))
            for w in range(n):
                cap += into_a * (v2.order + 1) * len(v1.table.hom(b, w))
        return self._close(comp, cap)

    def decide_dominant_component(self, comp):
        model = spread_out(comp.vertices, [a.morphism for a in comp.arrows])
        self.diagnostics["scopes"].append({"system": comp.label, "D": model.D})
        pairs = [self.probe_pair(v, model) for v in comp.vertices]
        seen = {}

        def hook(entry, table):
            if not entry.is_endo():
                return None
            pair = pairs[entry.src]
            m = entry.morphism
            res = self._fot(m, pair)
            if not res.finite:
                log.info("%s: %s has infinite order (%s)", comp.label,
                         word_str(entry.word), res.kind)
                return self._witness("InfiniteOrderEndo", comp, entry.src,
                                     table.root_word(entry), m, res)
            key = (entry.src, pair.action_key(m))
            prev = seen.get(key)
            if prev is None:
                seen[key] = (entry, res)
                return None
            g_entry, g_res = prev
            k = g_res.order - 1
            h = compose(m, power(g_entry.morphism, k))
            h_res = self._fot(h, pair)
            if h_res.finite:
                raise VarcatError("collision produced a finite-order element")
            g_word = table.root_word(g_entry)
            f_word = table.root_word(entry)
            log.info("%s: kernel collision between %s and %s", comp.label,
                     word_str(entry.word), word_str(g_entry.word))
            return self._witness(
                "KernelCollision", comp, entry.src, g_word * k + f_word, h, h_res,
                collision={"f_word": f_word, "g_word": g_word,
                           "g_order": g_res.order, "f": m, "g": g_entry.morphism})

        try:
            table, witness = bfs_closure(comp, cap=self.config.dominant_cap, hook=hook)
        except BudgetExceeded as exc:
            raise InternalCapExceeded(str(exc)) from exc
        if witness is not None:
            return Infinite(witness)
        return Finite(len(table), table)

    @staticmethod
    def _witness(kind, comp, vertex, word, morphism, cert, collision=None):
        origin = comp.origins[vertex]
        return Witness(kind, origin.root, origin.chain, word, morphism, cert,
                       collision)


def _component_bound(rep, orders):
    """Bound on the morphism count once every path component is finite.

    Every morphism ending in component c either stays in c or factors as
    (morphism of c) o (bridge) o (morphism ending in an earlier component).
    """
    ncomp = len(rep.classes)
    incoming = {c: [] for c in range(ncomp)}
    for a in rep.bridges:
        incoming[rep.class_of[a.dst]].append(rep.class_of[a.src])
    # components are acyclic under bridges; resolve in dependency order
    bound = {}
    pending = list(range(ncomp))
    while pending:
        for c in pending:
            if all(s in bound for s in incoming[c]):
                bound[c] = orders[c] * (1 + sum(bound[s] for s in incoming[c]))
                pending.remove(c)
                break
        else:  # pragma: no cover - the condensation is a DAG
            raise InternalCapExceeded("bridge arrows form a cycle")
    return sum(bound.values())


def decide(system, config=None):
    """Decide finiteness of the category generated by ``system``."""
    return Decider(config).decide_system(system)


# -- independent re-validation of witnesses --------------------------------

def word_morphism(system, vertex, word):
    """Compose root generators ``word`` (application order) from ``vertex``."""
    cur = Morphism.identity(system.vertices[vertex])
    at = vertex
    for name in word:
        try:
            a = system.arrow(name)
        except StopIteration:
            raise InvalidWitness(f"unknown generator {name!r}") from None
        if a.src != at:
            raise InvalidWitness(f"generator {name} does not start at vertex {at}")
        cur = compose(a.morphism, cur)
        at = a.dst
    if at != vertex:
        raise InvalidWitness("word does not return to its starting vertex")
    return cur


def _restrict_chain(m, chain):
    for z in chain:
        try:
            m = restrict_to(m, z, z)
        except NotWellDefined as exc:
            raise InvalidWitness(f"word does not preserve {z.name}: {exc}") from None
    return m


def _rebuild_pair(variety, cert, config):
    try:
        probes = [probe_at(variety, p, pt, config.pointset_cap, config.candidate_cap)
                  for p, pt in cert.probes]
    except VarcatError as exc:
        raise InvalidWitness(f"probe data does not rebuild: {exc}") from None
    if len(probes) != 2:
        raise InvalidWitness("certificate needs exactly two probes")
    try:
        return ProbePair(*probes)
    except ValueError:
        raise InvalidWitness("probe primes are not distinct") from None


def check_certificate(m, cert, config=None):
    """Re-derive an infinite-order certificate for the endomorphism ``m``."""
    config = config or DeciderConfig()
    if not m.is_endo():
        raise InvalidWitness("certified morphism is not an endomorphism")
    if not is_dominant(m):
        raise InvalidWitness("certified morphism is not dominant")
    pair = _rebuild_pair(m.source, cert, config)
    try:
        tables = pair.action_pair(m)
    except VarcatError as exc:
        raise InvalidWitness(f"action does not evaluate: {exc}") from None
    if cert.kind == "non_bijective":
        probe = next((pr for pr in pair if pr.p == cert.prime), None)
        if probe is None:
            raise InvalidWitness("collision prime is not one of the probes")
        i, j = (probe.index_of(pt) for pt in cert.points)
        if i < 0 or j < 0 or i == j:
            raise InvalidWitness("collision points are not distinct probe points")
        t = tables[0] if probe is pair.first else tables[1]
        if t[i] != t[j]:
            raise InvalidWitness("collision points have different images")
        return True
    if cert.kind != "kernel_power":
        raise InvalidWitness(f"unknown certificate kind {cert.kind!r}")
    if not all(is_bijective(t) for t in tables):
        raise InvalidWitness("action is not bijective; exponent claim is moot")
    N = cert.exponent
    if not isinstance(N, int) or N < 1:
        raise InvalidWitness("exponent must be a positive integer")
    for t in tables:
        if N % permutation_order(t):
            raise InvalidWitness(
                f"exponent {N} is not a multiple of the permutation order "
                f"{permutation_order(t)}")
    mN = power(m, N, config.power_term_cap)
    if cert.power is not None and mN != cert.power:
        raise InvalidWitness("recorded power does not match recomputation")
    if mN.is_identity():
        raise InvalidWitness(f"power {N} is the identity")
    return True


def validate_witness(witness, system, config=None):
    """Recompute ``witness`` from the generators of ``system``.

    Returns True or raises ``InvalidWitness`` naming the first failed check.
    """
    if not 0 <= witness.vertex < len(system.vertices):
        raise InvalidWitness("vertex index out of range")
    try:
        m = _restrict_chain(word_morphism(system, witness.vertex, witness.word),
                            witness.chain)
    except (SourceTargetMismatch, NotWellDefined) as exc:
        raise InvalidWitness(str(exc)) from None
    if m != witness.morphism:
        raise InvalidWitness("word does not evaluate to the recorded morphism")
    if witness.kind == "KernelCollision":
        c = witness.collision or {}
        f = _restrict_chain(word_morphism(system, witness.vertex, c["f_word"]),
                            witness.chain)
        g = _restrict_chain(word_morphism(system, witness.vertex, c["g_word"]),
                            witness.chain)
        k = c["g_order"] - 1
        if f == g:
            raise InvalidWitness("colliding endomorphisms coincide")
        if not power(g, k + 1).is_identity():
            raise InvalidWitness("recorded order of g is wrong")
        if tuple(witness.word) != tuple(c["g_word"]) * k + tuple(c["f_word"]):
            raise InvalidWitness("h is not spelled as f o g^(order-1)")
        pair = _rebuild_pair(m.source, witness.certificate, config or DeciderConfig())
        if pair.action_key(f) != pair.action_key(g):
            raise InvalidWitness("action pairs of f and g differ")
    elif witness.kind != "InfiniteOrderEndo":
        raise InvalidWitness(f"unknown witness kind {witness.kind!r}")
    return check_certificate(m, witness.certificate, config)


__all__ = [
    "Decider", "DeciderConfig", "Finite", "Infinite", "Witness", "decide",
    "validate_witness", "check_certificate", "word_morphism", "word_str",
]
