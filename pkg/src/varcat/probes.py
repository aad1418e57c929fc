"""Local probes at smooth mod-p points and the finite-order test.

A probe fixes a prime p not dividing the spreading-out denominator D and a
smooth F_p-point a of the reduced variety.  The local ring of the integral
model at a, truncated modulo the square of its maximal ideal, is

    Z/p^2 + F_p tau_1 + ... + F_p tau_e,     e = dim V,

and the probe enumerates every n-tuple over that ring annihilated by the
(integral) defining equations.  Endomorphisms act on this finite set by
composition.  For two probes of distinct residue characteristic the joint
kernel of this action inside the automorphism group is torsion free, which
powers both the finite-order test and the collision rule of the decider.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm

import numpy as np

from .errors import (NoProbeFound, NonInvertibleDenominator, NotDominant,
                     NotWellDefined, PointSetCapExceeded)
from .geometry import Morphism, is_dominant, power
from .rings import PrimeField, TruncatedRing

DEFAULT_POINTSET_CAP = 50_000
DEFAULT_CANDIDATE_CAP = 4_000_000


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(n + 1) if sieve[i]]


def prime_factors(n):
    out, d = set(), 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def rank_mod_p(rows, p):
    m = [list(r) for r in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col] % p:
                c = m[i][col]
                m[i] = [(x - c * y) % p for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def _coeff_mod(c, modulus, p):
    if c.denominator % p == 0:
        raise NonInvertibleDenominator(
            f"denominator {c.denominator} not invertible mod {modulus}")
    return c.numerator * pow(c.denominator, -1, modulus) % modulus


def eval_truncated(poly, U, B, p):
    """Evaluate ``poly`` at many truncated-ring points at once.

    ``U`` has shape (P, n) with entries mod p^2; ``B`` has shape (P, n, e)
    with entries mod p.  Returns arrays of shape (P,) and (P, e).
    """
    q = p * p
    P = U.shape[0]
    e = B.shape[2]
    cache = {}

    def mul(a, b):
        au, ab = a
        bu, bb = b
        u = au * bu % q
        v = ((au % p)[:, None] * bb + (bu % p)[:, None] * ab) % p
        return u, v

    def pw(i, k):
        if (i, k) not in cache:
            if k == 1:
                cache[(i, k)] = (U[:, i], B[:, i, :])
            else:
                h = pw(i, k // 2)
                sq = mul(h, h)
                cache[(i, k)] = mul(sq, pw(i, 1)) if k % 2 else sq
        return cache[(i, k)]

    tu = np.zeros(P, dtype=np.int64)
    tb = np.zeros((P, e), dtype=np.int64)
    for exp, c in poly.terms.items():
        val = (np.full(P, _coeff_mod(c, q, p), dtype=np.int64),
               np.zeros((P, e), dtype=np.int64))
        for i, k in enumerate(exp):
            if k:
                val = mul(val, pw(i, k))
        tu = (tu + val[0]) % q
        tb = (tb + val[1]) % p
    return tu, tb


class _RowIndex:
    """Lookup from ring tuples (as array rows) to their position in a list."""

    def __init__(self, rows, radix):
        self.width = rows.shape[1]
        self.radix = radix
        self.small = radix ** self.width < 2 ** 62
        if self.small:
            codes = self._codes(rows)
            self.order = np.argsort(codes, kind="stable")
            self.sorted = codes[self.order]
        else:
            self.table = {r.tobytes(): i for i, r in enumerate(rows)}

    def _codes(self, rows):
        codes = np.zeros(rows.shape[0], dtype=np.int64)
        for j in range(self.width - 1, -1, -1):
            codes = codes * self.radix + rows[:, j]
        return codes

    def lookup(self, rows):
        """Positions of ``rows``; -1 where absent."""
        if self.small:
            codes = self._codes(rows)
            pos = np.searchsorted(self.sorted, codes)
            pos = np.minimum(pos, len(self.sorted) - 1)
            hit = self.sorted[pos] == codes
            return np.where(hit, self.order[pos], -1)
        rows = np.ascontiguousarray(rows)
        return np.array([self.table.get(r.tobytes(), -1) for r in rows],
                        dtype=np.int64)


@dataclass(eq=False)
class LocalProbe:
    """Truncated-ring points of a variety at one smooth F_p-point."""
    variety: object
    p: int
    point: tuple
    e: int
    jacobian_rank: int
    U: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.ring = TruncatedRing(self.p, self.e)
        self._index = _RowIndex(self._rows(self.U, self.B), self.p * self.p)
        self._tables = {}

    @property
    def size(self):
        return self.U.shape[0]

    @staticmethod
    def _rows(U, B):
        P, n = U.shape
        return np.concatenate([U, B.reshape(P, -1)], axis=1)

    def element(self, i):
        """The i-th point as a tuple of ``TElt``."""
        r = self.ring
        return tuple(r.element(int(self.U[i, j]), [int(x) for x in self.B[i, j]])
                     for j in range(self.U.shape[1]))

    def index_of(self, pt):
        u = np.array([[x.u for x in pt]], dtype=np.int64)
        b = np.array([[list(x.b) for x in pt]], dtype=np.int64).reshape(1, len(pt), self.e)
        return int(self._index.lookup(self._rows(u, b))[0])

    def table(self, f):
        """Index map of ``phi -> f o phi`` on the point set."""
        if f.source != self.variety or f.target != self.variety:
            raise NotWellDefined("action table needs an endomorphism of the probed variety")
        cached = self._tables.get(f)
        if cached is not None:
            return cached
        n = self.U.shape[1]
        us, bs = [], []
        for c in f.coords:
            u, b = eval_truncated(c, self.U, self.B, self.p)
            us.append(u)
            bs.append(b)
        U2 = np.stack(us, axis=1) if n else np.zeros((self.size, 0), np.int64)
        B2 = (np.stack(bs, axis=1) if n
              else np.zeros((self.size, 0, self.e), np.int64))
        idx = self._index.lookup(self._rows(U2, B2))
        if (idx < 0).any():
            raise NotWellDefined("morphism leaves the probe point set")
        idx.setflags(write=False)
        self._tables[f] = idx
        return idx

    def describe(self):
        return {"prime": self.p, "point": list(self.point), "e": self.e,
                "points": self.size}


@dataclass(eq=False)
class ProbePair:
    first: LocalProbe
    second: LocalProbe

    def __post_init__(self):
        if self.first.p == self.second.p:
            raise ValueError("probe pair needs distinct primes")

    def __iter__(self):
        return iter((self.first, self.second))

    def action_pair(self, f):
        return tuple(probe.table(f) for probe in self)

    def action_key(self, f):
        return tuple(t.tobytes() for t in self.action_pair(f))


def _scaled_generators(variety, p):
    # monic reduced basis: coefficients lie in Z_(p) whenever p does not divide D
    gens = variety.gb.elements
    for g in gens:
        if g.denominator_lcm() % p == 0:
            raise NonInvertibleDenominator(f"basis denominator divisible by {p}")
    return gens


def smooth_point_data(variety, p, a):
    """Relation-matrix data at the F_p-point ``a``, or None if ``a`` is unusable.

    Returns ``(jacobian_rank, e)`` when ``a`` lies on the reduction, the
    Jacobian has rank ``n - dim`` there, and p is nonzero in the cotangent
    space.
    """
    n = variety.nvars
    gens = _scaled_generators(variety, p)
    mod_q = TruncatedRing(p, 0)
    gf = PrimeField(p)
    rows, grads = [], []
    for g in gens:
        val = g.evaluate([mod_q.element(x) for x in a], mod_q).u
        if val % p:
            return None
        grad = [g.diff(i).evaluate(list(a), gf) for i in range(n)]
        rows.append([val // p % p] + grad)
        grads.append(grad)
    codim = n - variety.dim
    jr = rank_mod_p(grads, p) if grads else 0
    if jr != codim:
        return None
    full = rank_mod_p(rows, p) if rows else 0
    if full != jr:
        return None
    return jr, n - full


def enumerate_points(variety, p, e, pointset_cap=DEFAULT_POINTSET_CAP,
                     candidate_cap=DEFAULT_CANDIDATE_CAP):
    """All n-tuples over the truncated ring killed by the defining equations.

    Brute force: for each F_p-point of the reduction, try every lift of each
    coordinate (p choices for the p-adic digit, p^e for the tau part).
    """
    n = variety.nvars
    gens = _scaled_generators(variety, p)
    gf = PrimeField(p)
    residues = [r for r in itertools.product(range(p), repeat=n)
                if all(g.evaluate(list(r), gf) == 0 for g in gens)]
    per_coord = p ** (1 + e)
    total = len(residues) * per_coord ** n
    if total > candidate_cap:
        raise PointSetCapExceeded(
            f"{total} candidate tuples at p={p} exceed cap {candidate_cap}")
    # lift digits: s (p-adic digit) and b (tau coefficients), per coordinate
    digits = np.array(list(itertools.product(range(p), repeat=(1 + e) * n)),
                      dtype=np.int64).reshape(-1, n, 1 + e) if n else np.zeros((1, 0, 1 + e), np.int64)
    Us, Bs = [], []
    for r in residues:
        r_arr = np.array(r, dtype=np.int64)
        U = r_arr[None, :] + p * digits[:, :, 0]
        B = digits[:, :, 1:]
        keep = np.ones(U.shape[0], dtype=bool)
        for g in gens:
            gu, gb = eval_truncated(g, U, B, p)
            keep &= (gu == 0) & (gb == 0).all(axis=1)
        Us.append(U[keep])
        Bs.append(B[keep])
        if sum(len(x) for x in Us) > pointset_cap:
            raise PointSetCapExceeded(
                f"point set at p={p} exceeds cap {pointset_cap}")
    U = np.concatenate(Us) if Us else np.zeros((0, n), np.int64)
    B = np.concatenate(Bs) if Bs else np.zeros((0, n, e), np.int64)
    return U, B


def find_probe(variety, p, pointset_cap=DEFAULT_POINTSET_CAP,
               candidate_cap=DEFAULT_CANDIDATE_CAP):
    """Probe at the first smooth F_p-point in lexicographic order, or None."""
    for a in itertools.product(range(p), repeat=variety.nvars):
        data = smooth_point_data(variety, p, a)
        if data is None:
            continue
        jr, e = data
        U, B = enumerate_points(variety, p, e, pointset_cap, candidate_cap)
        return LocalProbe(variety, p, tuple(a), e, jr, U, B)
    return None


def probe_at(variety, p, point, pointset_cap=DEFAULT_POINTSET_CAP,
             candidate_cap=DEFAULT_CANDIDATE_CAP):
    """Rebuild a probe at a given point; raises if the point is unusable."""
    data = smooth_point_data(variety, p, tuple(point))
    if data is None:
        raise NoProbeFound(f"{tuple(point)} is not a smooth point mod {p}")
    jr, e = data
    U, B = enumerate_points(variety, p, e, pointset_cap, candidate_cap)
    return LocalProbe(variety, p, tuple(point), e, jr, U, B)


def find_probe_pair(variety, model, prime_bound=97,
                    pointset_cap=DEFAULT_POINTSET_CAP,
                    candidate_cap=DEFAULT_CANDIDATE_CAP):
    found, tried = [], []
    for p in primes_up_to(prime_bound):
        if not model.admits(p):
            tried.append({"prime": p, "reason": "divides D"})
            continue
        probe = find_probe(variety, p, pointset_cap, candidate_cap)
        if probe is None:
            tried.append({"prime": p, "reason": "no smooth F_p-point"})
            continue
        found.append(probe)
        if len(found) == 2:
            return ProbePair(*found)
    raise NoProbeFound(
        f"no two admissible primes <= {prime_bound} with smooth points on "
        f"{variety.name}",
        {"variety": variety.name, "D": model.D, "tried": tried,
         "found": [pr.p for pr in found]})


def is_bijective(table):
    return len(np.unique(table)) == len(table)


def collision(table):
    """Two indices with the same image, or None."""
    seen = {}
    for i, j in enumerate(table.tolist()):
        if j in seen:
            return seen[j], i
        seen[j] = i
    return None


def cycle_lengths(perm):
    perm = perm.tolist()
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            k, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                k += 1
            out.append(k)
    return out


def permutation_order(perm):
    return lcm(1, *cycle_lengths(perm))


@dataclass
class FiniteOrder:
    order: int
    exponent: int
    perm_orders: tuple

    finite = True


@dataclass
class InfiniteOrder:
    """Certificate that an endomorphism has infinite order.

    ``kind == "non_bijective"``: at probe prime ``prime`` the points with
    indices ``points`` have the same image, so the map is not an
    automorphism and a dominant endomorphism of finite order would be one.
    ``kind == "kernel_power"``: both actions are bijective, ``exponent`` is a
    multiple of both permutation orders, and ``power`` (the iterate) is not
    the identity although it acts trivially at two coprime probes.
    """
    kind: str
    probes: tuple
    exponent: int = None
    power: Morphism = None
    prime: int = None
    points: tuple = None

    finite = False


def finite_order_test(f, probes, term_cap=None, check_dominant=True):
    if not f.is_endo():
        raise NotDominant("finite-order test needs an endomorphism")
    if check_dominant and not is_dominant(f):
        raise NotDominant(f"{f} is not dominant")
    where = tuple((pr.p, pr.point) for pr in probes)
    tables = probes.action_pair(f)
    for pr, t in zip(probes, tables):
        hit = collision(t)
        if hit is not None:
            return InfiniteOrder("non_bijective", where, prime=pr.p,
                                 points=(pr.element(hit[0]), pr.element(hit[1])))
    orders = tuple(permutation_order(t) for t in tables)
    N = lcm(*orders)
    fN = power(f, N, term_cap)
    if not fN.is_identity():
        return InfiniteOrder("kernel_power", where, exponent=N, power=fN)
    order = N
    primes = set()
    for t in tables:
        for c in set(cycle_lengths(t)):
            primes |= prime_factors(c)
    for q in sorted(primes):
        while order % q == 0 and power(f, order // q, term_cap).is_identity():
            order //= q
    return FiniteOrder(order, N, orders)
