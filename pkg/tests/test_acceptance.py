"""Acceptance criteria 1-7.

Each test appends one PASS/FAIL line to ``ACCEPTANCE_LINES`` (printed in the
terminal summary) and then asserts.  Expected values come from independent
oracles in ``oracles.py`` or from hand derivations noted inline.
"""
import itertools
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from varcat.cli import dumps, run_decide, run_orbit
from varcat.decider import decide, validate_witness
from varcat.documents import load_system, witness_from_doc
from varcat.dynamics import (MonoidAction, Periodic, cyclic_periodicity,
                             m_periodicity, orbit_bfs)
from varcat.geometry import (Morphism, Variety, compose, image_closure,
                             is_dominant, spread_out)
from varcat.probes import find_probe_pair, finite_order_test
from varcat.quiver import path_components

from conftest import ACCEPTANCE_LINES, CORPUS, load, poly
from oracles import (affine_closure, affine_system, iterate_order, oracle_rows,
                     random_affine_cases)


def report(n, title, failures, detail=""):
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {n} [{status}] {title}"
    if detail:
        line += f" ({detail})"
    if failures:
        line += f": {failures[:3]}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failures, line


# -- 1. curated verdict corpus ----------------------------------------------

LINE = {"name": "A", "vars": ["x"], "ideal": []}


def single(*coords):
    return {"vertices": [LINE],
            "arrows": [{"name": n, "src": "A", "dst": "A", "coords": [c]}
                       for n, c in zip("fgh", coords)]}


CURATED = [
    # hand-derived: {id, -x}
    ("negation", single("-x"), "finite", 2),
    # {id, -x, 0}: 0 o (-x) = 0 and (-x) o 0 = 0
    ("zero and negation", single("0", "-x"), "finite", 3),
    # (1 - x) o (-x) = 1 + x has infinite order
    ("infinite dihedral", single("-x", "1 - x"), "infinite", None),
    ("shift", single("x + 1"), "infinite", None),
    # degrees 2^k are distinct
    ("square", single("x^2"), "infinite", None),
    # {id_A, id_B, x^2: A -> B}
    ("bridge only", load("bridge.json"), "finite", 3),
    ("identities only", load("identities.json"), "finite", 3),
    ("cusp reflection", load("cusp.json"), "finite", 2),
    ("dihedral of order 8", load("dihedral8.json"), "finite", 8),
    # Hom(A,A)={id}, Hom(A,B)={i}, Hom(B,A)={p}, Hom(B,B)={id, s, i o p}
    ("line in plane", load("line_plane.json"), "finite", 6),
    ("kernel collision", load("collision.json"), "infinite", None),
    ("non-dominant then shift", load("zero_shift.json"), "infinite", None),
]


def test_criterion_1_curated_corpus():
    failures, slowest = [], 0.0
    for name, doc, verdict, order in CURATED:
        t0 = time.perf_counter()
        status, out = run_decide(doc)
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if out["verdict"] != verdict or out.get("order") != order or dt > 10:
            failures.append((name, out["verdict"], out.get("order"), round(dt, 2)))
        if verdict == "infinite":
            S = load_system(doc)
            if not validate_witness(witness_from_doc(out["witness"], S), S):
                failures.append((name, "witness"))
    report(1, "curated verdict corpus", failures,
           f"{len(CURATED)} cases, slowest {slowest:.2f}s <= 10s")


# -- 2. random systems against brute-force closure --------------------------

RANDOM_CASES = (random_affine_cases(2024, 30, biased=False)
                + random_affine_cases(2025, 30, biased=True))


def test_criterion_2_random_oracle():
    failures, finite, infinite = [], 0, 0
    for k, (dims, arrows) in enumerate(RANDOM_CASES):
        S = affine_system(dims, arrows)
        v = decide(S)
        closure = affine_closure(dims, arrows, cap=10_000)
        if closure is not None:
            got = ({(e.src, e.dst, tuple(e.morphism.coords_str()))
                    for e in v.table.entries} if v.finite else None)
            if not v.finite or v.order != len(closure) or got != oracle_rows(dims, closure):
                failures.append((k, dims, arrows))
            finite += 1
        else:
            if v.finite or not validate_witness(v.witness, S):
                failures.append((k, dims, arrows))
            infinite += 1
    report(2, "random systems vs brute-force closure", failures,
           f"{len(RANDOM_CASES)} systems, {finite} finite, {infinite} infinite")


# -- 3. finite-order test against iteration ---------------------------------

A1 = Variety("A1", ["x"])
A2 = Variety("A2", ["x", "y"])
CUSP = Variety("cusp", ["x", "y"], [poly("y^2 - x^3", "xy")])


def m(v, *coords):
    return Morphism(v, v, [poly(c, v.vars) for c in coords])


def conjugate(f, shift, unshift):
    """unshift o f o shift for a translation and its inverse."""
    return compose(unshift, compose(f, shift))


ENDOS = [
    m(A1, "x"), m(A1, "-x"), m(A1, "x + 1"), m(A1, "2*x"), m(A1, "3 - x"),
    m(A1, "1/2*x + 1"), m(A1, "-x + 1/3"), m(A1, "x^2"), m(A1, "x^3"),
    m(A1, "-x^3"), m(A1, "x^2 + 1"),
    conjugate(m(A1, "x^2"), m(A1, "x + 1"), m(A1, "x - 1")),
    m(A2, "-y", "x"), m(A2, "y", "x"), m(A2, "-y", "x - y"), m(A2, "x + y", "y"),
    m(A2, "x", "y + x^2"), m(A2, "x", "-y + x^2"), m(A2, "x^2", "y"),
    m(A2, "x*y", "y"), m(A2, "-x", "-y"), m(A2, "y + 1", "x - 1"),
    m(A2, "y", "x + y"), m(A2, "x*y^2", "x^2*y"),
    conjugate(m(A2, "-y", "x"), m(A2, "x + 1", "y - 2"), m(A2, "x - 1", "y + 2")),
    conjugate(m(A2, "x", "-y + x^2"), m(A2, "x + 1", "y - 2"), m(A2, "x - 1", "y + 2")),
    conjugate(m(A2, "x + y", "y"), m(A2, "x - 1", "y + 1"), m(A2, "x + 1", "y - 1")),
    m(CUSP, "x", "-y"), m(CUSP, "4*x", "8*y"),
]


def oracle_order(f):
    try:
        return iterate_order(f, steps=500, term_cap=300)
    except OverflowError:
        # a univariate map of degree d >= 2 has iterates of degree d^k, all
        # distinct, so no repeat can occur
        assert f.source.nvars == 1 and f.coords[0].degree() >= 2
        return None


def test_criterion_3_finite_order_vs_iteration():
    failures, finite = [], 0
    for f in ENDOS:
        pair = find_probe_pair(f.source, spread_out([f.source], [f]))
        res = finite_order_test(f, pair)
        expected = oracle_order(f)
        got = res.order if res.finite else None
        finite += expected is not None
        if got != expected:
            failures.append((f, got, expected))
    report(3, "finite-order test vs symbolic iteration", failures,
           f"{len(ENDOS)} endomorphisms, {finite} of finite order")


# -- 4. groupoid and torsor invariants --------------------------------------

def test_criterion_4_groupoid_torsor():
    systems = [load_system(load(p.name)) for p in sorted(CORPUS.glob("*.json"))
               if p.name != "bad_arrow.json"]
    systems += [affine_system(d, a) for d, a in RANDOM_CASES]
    extra = load_system({
        "vertices": [{"name": "A", "vars": ["x", "y"]}, {"name": "B", "vars": ["u", "v"]}],
        "arrows": [{"name": "f", "src": "A", "dst": "B", "coords": ["y", "x"]},
                   {"name": "g", "src": "B", "dst": "A", "coords": ["-u", "v"]}]})
    systems.append(extra)
    failures, checked = [], 0
    for S in systems:
        if len(path_components(S).classes) != 1:
            continue
        if not all(is_dominant(a.morphism) for a in S.arrows):
            continue
        v = decide(S)
        if not v.finite:
            continue
        checked += 1
        t = v.table
        for e in t.entries:
            inverses = [b for b in t.hom(e.dst, e.src)
                        if compose(b.morphism, e.morphism).is_identity()
                        and compose(e.morphism, b.morphism).is_identity()]
            if not inverses:
                failures.append((S.label, e.morphism))
        n = len(S.vertices)
        for a, b in itertools.product(range(n), repeat=2):
            h = len(t.hom(a, b))
            if h and h != len(t.hom(b, b)):
                failures.append((S.label, a, b, h))
    if checked < 5:
        failures.append(("too few systems", checked))
    report(4, "groupoid inverses and torsor counts", failures,
           f"{checked} finite all-dominant connected systems")


# -- 5. elimination correctness ---------------------------------------------

def _map(src, dst, *coords):
    return Morphism(src, dst, [poly(c, src.vars) for c in coords])


A3 = Variety("A3", ["x", "y", "z"])
ELIM_MAPS = [
    _map(A1, A2, "x^2", "x^3"), _map(A1, A2, "x", "0"), _map(A1, A2, "x", "x^2"),
    _map(A1, A2, "x^2 - 1", "x^3 - x"), _map(A1, A3, "x", "x^2", "x^3"),
    _map(A1, A3, "x^2", "x^3", "x^5"), _map(A2, A1, "x*y"), _map(A2, A1, "x + y^2"),
    _map(A2, A2, "x*y", "x + y"), _map(A2, A2, "x^2", "y^2"), _map(A2, A2, "x", "x"),
    _map(A2, A2, "x + y", "(x + y)^2"), _map(A2, A3, "x", "y", "x*y"),
    _map(A2, A3, "x^2", "x*y", "y^2"), _map(A2, A3, "x", "x", "y"),
    _map(A3, A2, "x*y", "z"), _map(A3, A3, "x*y", "y*z", "x*z"),
    _map(A1, A1, "3"), _map(A2, A2, "1/2*x - y", "2*x - 4*y"),
    _map(A1, A2, "1/3*x^3", "x - 1"), _map(CUSP, A1, "y"), _map(CUSP, A2, "x", "x*y"),
]


def _sample(variety, rng):
    t = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
    if variety is CUSP:
        return (t * t, t * t * t)  # the cusp is parametrized by t -> (t^2, t^3)
    return tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                 for _ in range(variety.nvars))


def test_criterion_5_elimination():
    rng = random.Random(5)
    failures = []
    for f in ELIM_MAPS:
        gens = image_closure(f).gb.elements
        for _ in range(200):
            y = f.apply(_sample(f.source, rng))
            if any(g.evaluate(y) != 0 for g in gens):
                failures.append((f, y))
                break
    # hand elimination: y^2 - x^3 cuts out the cusp; y cuts out the x-axis
    fixtures = [
        (_map(A1, A2, "x^2", "x^3"), False), (_map(A1, CUSP, "x^2", "x^3"), True),
        (_map(A1, A2, "x", "0"), False), (_map(A2, A1, "x"), True),
        (_map(CUSP, A1, "x"), True), (_map(A1, A1, "3"), False),
    ]
    for f, expected in fixtures:
        if is_dominant(f) != expected:
            failures.append(("dominance", f))
    if image_closure(fixtures[0][0]) != CUSP:
        failures.append("cusp image")
    report(5, "elimination and dominance", failures,
           f"{len(ELIM_MAPS)} morphisms x 200 points, {len(fixtures)} fixtures")


# -- 6. dynamics --------------------------------------------------------------

def test_criterion_6_dynamics():
    failures = []
    rep = run_orbit(single("-x"), point=["1"])
    if (rep["orbit"]["size"], rep["mPeriodic"]) != (2, True):
        failures.append("negation")
    rep = run_orbit(single("x^2"), point=["-1"])
    if ((rep["orbit"]["size"], rep["orbit"]["complete"], rep["mPeriodic"])
            != (2, True, False)
            or rep["cyclic"]["f"] != {"status": "preperiodic", "tail": 1, "period": 1}):
        failures.append("square")
    doc = single("-x", "1 - x")
    doc["options"] = {"orbitBudget": 100, "wordRadius": 3}
    rep = run_orbit(doc, point=["0"], pairs=True)
    probe = rep["pairProbe"]
    if (rep["orbit"]["complete"] or not probe["unboundedCyclic"]
            or not any(w["f"] == "g∘f" for w in probe["unboundedCyclic"])):
        failures.append("dihedral")

    # (a) => (c) on every action whose orbit completes
    actions = []
    for p in sorted(CORPUS.glob("*.json")):
        d = load(p.name)
        if "orbit" not in d:
            continue
        S = load_system(d)
        vi = [v.name for v in S.vertices].index(d["orbit"]["vertex"])
        gens = [a.morphism for a in S.arrows if a.src == vi == a.dst]
        actions.append(MonoidAction(S.vertices[vi], gens, d["orbit"]["point"]))
    rng = random.Random(6)
    for f in ENDOS:
        if f.source is CUSP:
            pts = [(t * t, t * t * t) for t in range(-3, 4)]
        else:
            pts = [tuple(rng.randint(-3, 3) for _ in range(f.source.nvars))
                   for _ in range(5)]
        actions += [MonoidAction(f.source, [f], p) for p in pts]
    complete = periodic = 0
    for act in actions:
        # squaring maps double the height each step, so budgets stay small
        r = orbit_bfs(act, 12)
        if not r.complete:
            continue
        complete += 1
        if m_periodicity(r):
            periodic += 1
            for g in act.generators:
                if not isinstance(cyclic_periodicity(g, act.point, 12), Periodic):
                    failures.append(("(a)=>(c)", g, act.point))
    report(6, "dynamics corpus and periodicity consistency", failures,
           f"{complete} complete orbits, {periodic} M-periodic")


# -- 7. determinism -----------------------------------------------------------

def _cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    return subprocess.run([sys.executable, "-m", "varcat", *args], env=env,
                          capture_output=True).stdout


def _stable_view(out):
    v = {"verdict": out["verdict"], "order": out.get("order")}
    if "homTable" in out:
        v["rows"] = sorted((r["source"], r["target"], tuple(r["coords"]))
                           for r in out["homTable"])
    return v


def test_criterion_7_determinism():
    failures = []
    docs = sorted(p.name for p in CORPUS.glob("*.json"))
    for name in docs:
        path = str(CORPUS / name)
        if _cli(["decide", path], 1) != _cli(["decide", path], 2):
            failures.append(("decide", name))
        if "orbit" in load(name):
            args = ["orbit", path, "--pairs", "--word-radius", "2", "--orbit-budget", "200"]
            if _cli(args, 3) != _cli(args, 4):
                failures.append(("orbit", name))
    permuted = 0
    for name in docs:
        doc = load(name)
        if name == "bad_arrow.json" or len(doc.get("arrows", [])) < 2:
            continue
        base = _stable_view(run_decide(doc)[1])
        for perm in itertools.permutations(doc["arrows"]):
            d = dict(doc, arrows=list(perm))
            status, out = run_decide(d)
            permuted += 1
            if _stable_view(out) != base:
                failures.append(("permutation", name))
            if dumps(out) != dumps(run_decide(d)[1]):
                failures.append(("repeat", name))
    report(7, "determinism across runs and arrow orders", failures,
           f"{len(docs)} documents, {permuted} permuted inputs")
