"""Independent reference computations used by the tests.

The affine oracle works with integer matrices only: a map x -> Mx + b is a
pair (M, b), composition is matrix arithmetic, and the closure is a plain
BFS over those pairs.  No polynomial or Groebner code is involved.
"""
import random

from varcat.geometry import Morphism, Variety, compose
from varcat.poly import Poly
from varcat.quiver import System

NAMES = "xyz"


def mat_compose(f, g):
    """(M1, b1) o (M2, b2)."""
    (M1, b1), (M2, b2) = f, g
    M = tuple(tuple(sum(M1[i][k] * M2[k][j] for k in range(len(M2)))
                    for j in range(len(M2[0]))) for i in range(len(M1)))
    b = tuple(sum(M1[i][k] * b2[k] for k in range(len(b2))) + b1[i]
              for i in range(len(M1)))
    return M, b


def identity(d):
    return (tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), (0,) * d)


def affine_closure(dims, arrows, cap=10_000):
    """Set of (src, dst, (M, b)) in the generated category, or None past ``cap``."""
    seen, queue = set(), []
    for v, d in enumerate(dims):
        e = (v, v, identity(d))
        seen.add(e)
        queue.append(e)
    head = 0
    while head < len(queue):
        s, t, m = queue[head]
        head += 1
        for a, b, am in arrows:
            if a == t:
                e = (s, b, mat_compose(am, m))
                if e not in seen:
                    seen.add(e)
                    queue.append(e)
                    if len(seen) > cap:
                        return None
    return seen


def affine_coords(d_src, M, b):
    X = [Poly.var(d_src, i) for i in range(d_src)]
    return [sum((X[j] * M[i][j] for j in range(d_src)), Poly.const(d_src, b[i]))
            for i in range(len(M))]


def affine_system(dims, arrows):
    vs = [Variety(f"V{i}", list(NAMES[:d])) for i, d in enumerate(dims)]
    return System.build(vs, [(f"a{k}", s, t, affine_coords(dims[s], *m))
                             for k, (s, t, m) in enumerate(arrows)])


# matrices keyed by (source dim, target dim), entries in [-2, 2], biased
# towards finite order
_POOL = {
    (1, 1): [((1,),), ((-1,),), ((0,),)],
    (2, 2): [((0, -1), (1, 0)), ((0, 1), (1, 0)), ((-1, 0), (0, -1)),
             ((0, -1), (1, -1)), ((1, -1), (1, 0)), ((1, 0), (0, 0)),
             ((0, 0), (0, 0)), ((1, 0), (0, 1)), ((-1, 0), (0, 1))],
    (2, 1): [((1, 0),), ((0, 1),), ((0, 0),), ((1, 1),)],
    (1, 2): [((1,), (0,)), ((1,), (1,)), ((0,), (0,)), ((1,), (-1,))],
}


def random_affine(rng, biased):
    """Random (dims, arrows): 1-2 vertices of dimension 1-2, 1-3 arrows."""
    nv = rng.randint(1, 2)
    dims = [rng.randint(1, 2) for _ in range(nv)]
    arrows = []
    for _ in range(rng.randint(1, 3)):
        s, t = rng.randrange(nv), rng.randrange(nv)
        if biased and rng.random() >= 0.25:
            M = rng.choice(_POOL[(dims[s], dims[t])])
            b = tuple(rng.choice([0, 0, 0, 1, -1]) for _ in range(dims[t]))
        else:
            M = tuple(tuple(rng.randint(-2, 2) for _ in range(dims[s]))
                      for _ in range(dims[t]))
            b = tuple(rng.randint(-2, 2) for _ in range(dims[t]))
        arrows.append((s, t, (M, b)))
    return dims, arrows


def random_affine_cases(seed, count, biased):
    rng = random.Random(seed)
    return [random_affine(rng, biased) for _ in range(count)]


def oracle_rows(dims, closure):
    """Closure as a set of (src, dst, coordinate strings)."""
    system = affine_system(dims, [])
    out = set()
    for s, t, (M, b) in closure:
        m = Morphism(system.vertices[s], system.vertices[t],
                     affine_coords(dims[s], M, b))
        out.add((s, t, tuple(m.coords_str())))
    return out


def iterate_order(f, steps=500, term_cap=2_000):
    """Order of ``f`` by plain iteration f, f o f, ...

    Returns the least k <= steps with f^k = id, or None if no iterate
    repeats within ``steps``.  Raises OverflowError if an iterate grows past
    ``term_cap`` terms before that.
    """
    seen = {Morphism.identity(f.source): 0}
    g = Morphism.identity(f.source)
    for k in range(1, steps + 1):
        g = compose(f, g)
        if g.term_count() > term_cap:
            raise OverflowError(k)
        if g in seen:
            assert seen[g] == 0, "dominant endomorphism repeated away from the identity"
            return k
        seen[g] = k
    return None
