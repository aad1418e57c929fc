"""Systems of varieties, path components, and closure under composition."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import BudgetExceeded, NotWellDefined
from .geometry import Morphism, compose

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Arrow:
    """A generator ``src -> dst`` of a system.

    ``word`` spells the arrow in the generators of the root system, in
    application order; for root arrows it is just ``(name,)``.
    """
    name: str
    src: int
    dst: int
    morphism: Morphism
    word: tuple = ()

    def root_word(self):
        return self.word or (self.name,)


@dataclass(frozen=True)
class Origin:
    """Where a vertex of a derived system comes from.

    ``root`` is a vertex index of the root system; ``chain`` lists the nested
    invariant subvarieties (image closures) the vertex was cut down to.
    """
    root: int
    chain: tuple = ()


class System:
    """A finite quiver of varieties and morphisms."""

    def __init__(self, vertices, arrows, origins=None, label="S"):
        self.vertices = list(vertices)
        self.arrows = list(arrows)
        self.origins = (list(origins) if origins is not None
                        else [Origin(i) for i in range(len(self.vertices))])
        self.label = label
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for a in self.arrows:
            if not (0 <= a.src < len(self.vertices) and 0 <= a.dst < len(self.vertices)):
                raise ValueError(f"arrow {a.name} has an invalid endpoint")
            if (a.morphism.source != self.vertices[a.src]
                    or a.morphism.target != self.vertices[a.dst]):
                raise NotWellDefined(f"arrow {a.name} does not match its endpoints")

    @classmethod
    def build(cls, vertices, arrows):
        """Convenience constructor from ``(name, src, dst, coords)`` tuples."""
        out = []
        for name, s, d, coords in arrows:
            out.append(Arrow(name, s, d, Morphism(vertices[s], vertices[d], coords)))
        return cls(vertices, out)

    def arrow(self, name):
        return next(a for a in self.arrows if a.name == name)

    def subsystem(self, vertex_ids, arrows, label):
        """Restrict to ``vertex_ids`` (re-indexed in the given order)."""
        pos = {v: i for i, v in enumerate(vertex_ids)}
        new_arrows = [Arrow(a.name, pos[a.src], pos[a.dst], a.morphism, a.root_word())
                      for a in arrows]
        return System([self.vertices[v] for v in vertex_ids], new_arrows,
                      [self.origins[v] for v in vertex_ids], label)

    def without(self, arrow):
        return System(self.vertices, [a for a in self.arrows if a is not arrow],
                      self.origins, f"{self.label}-{arrow.name}")


@dataclass
class PathComponentReport:
    classes: list
    core: list
    bridges: list
    class_of: dict

    def component_systems(self, system):
        out = []
        for k, cls in enumerate(self.classes):
            arrows = [a for a in self.core if self.class_of[a.src] == k]
            label = "{" + ",".join(system.vertices[v].name for v in cls) + "}"
            out.append(system.subsystem(cls, arrows, f"{system.label}/{label}"))
        return out


def path_components(system):
    """Strongly connected components (Tarjan), ordered by least vertex index."""
    n = len(system.vertices)
    succ = [[] for _ in range(n)]
    for a in system.arrows:
        succ[a.src].append(a.dst)
    index, low, on_stack = {}, {}, set()
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            if i < len(succ[v]):
                work.append((v, i + 1))
                w = succ[v][i]
                if w not in index:
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=lambda c: c[0])
    class_of = {v: k for k, c in enumerate(comps) for v in c}
    core = [a for a in system.arrows if class_of[a.src] == class_of[a.dst]]
    bridges = [a for a in system.arrows if class_of[a.src] != class_of[a.dst]]
    return PathComponentReport(comps, core, bridges, class_of)


@dataclass(eq=False)
class HomEntry:
    morphism: Morphism
    src: int
    dst: int
    word: tuple  # arrow names in application order; () for identities

    def is_endo(self):
        return self.src == self.dst


@dataclass
class HomTable:
    """Enumerated morphisms of the generated category, in discovery order."""
    system: System
    entries: list = field(default_factory=list)
    complete: bool = False

    def __post_init__(self):
        self._keys = {}

    def add(self, entry):
        self._keys[(entry.src, entry.dst, entry.morphism)] = entry
        self.entries.append(entry)

    def find(self, src, dst, morphism):
        return self._keys.get((src, dst, morphism))

    def __contains__(self, item):
        src, dst, m = item
        return (src, dst, m) in self._keys

    def __len__(self):
        return len(self.entries)

    def hom(self, src, dst):
        return [e for e in self.entries if e.src == src and e.dst == dst]

    def order(self):
        return len(self.entries)

    def root_word(self, entry):
        out = []
        for name in entry.word:
            out.extend(self.system.arrow(name).root_word())
        return tuple(out)


def bfs_closure(system, cap=10_000, hook=None):
    """Enumerate the category generated by ``system``.

    Starting from the identities, every discovered morphism is extended by
    every generator leaving its target, in FIFO order with generators taken
    by index.  New morphisms are deduplicated by canonical form and passed to
    ``hook(entry, table)``; a non-None return value stops the search and is
    returned alongside the table.  Exceeding ``cap`` morphisms raises
    ``BudgetExceeded``.
    """
    table = HomTable(system)
    by_source = {}
    for a in system.arrows:
        by_source.setdefault(a.src, []).append(a)

    def discover(entry):
        table.add(entry)
        log.debug("discovered %s: %s", "∘".join(reversed(entry.word)) or "id",
                  entry.morphism)
        if hook is not None:
            return hook(entry, table)
        return None

    for v, var in enumerate(system.vertices):
        verdict = discover(HomEntry(Morphism.identity(var), v, v, ()))
        if verdict is not None:
            return table, verdict
    head = 0
    while head < len(table.entries):
        entry = table.entries[head]
        head += 1
        for a in by_source.get(entry.dst, ()):
            m = compose(a.morphism, entry.morphism)
            if (entry.src, a.dst, m) in table:
                continue
            if len(table) >= cap:
                raise BudgetExceeded(
                    f"closure of {system.label} exceeded {cap} morphisms",
                    {"system": system.label, "cap": cap, "found": len(table)})
            verdict = discover(HomEntry(m, entry.src, a.dst, entry.word + (a.name,)))
            if verdict is not None:
                return table, verdict
    table.complete = True
    return table, None
