"""JSON documents: system input, verdict output, orbit reports.

A system document looks like::

    {
      "vertices": [{"name": "A", "vars": ["x", "y"], "ideal": ["y^2 - x^3"]}],
      "arrows": [{"name": "f", "src": "A", "dst": "A", "coords": ["x", "-y"]}],
      "options": {"primeBound": 97, "pointSetCap": 50000, "orbitBudget": 10000,
                  "wordRadius": 4, "traceLevel": "none",
                  "safetyCaps": {"dominant": 100000, "powerTerms": 20000}},
      "orbit": {"vertex": "A", "point": ["1", "1"], "generators": ["f"],
                "components": [["x - 1", "y - 1"], ["x - 1", "y + 1"]]}
    }

``options`` and ``orbit`` are optional.  ``orbit.components`` lists ideals of
the irreducible components of an orbit closure, when the user knows them;
the orbit report then includes the decider's verdict on the system they form.
"""
from __future__ import annotations

from fractions import Fraction

from .decider import DeciderConfig, Witness, word_str
from .errors import DocumentError, ParseError, VarcatError
from .geometry import Morphism, Variety
from .parsing import parse_polynomial, parse_rational
from .poly import format_poly
from .probes import InfiniteOrder
from .quiver import Arrow, System
from .rings import TElt

OPTION_DEFAULTS = {
    "primeBound": 97,
    "pointSetCap": 50_000,
    "orbitBudget": 10_000,
    "wordRadius": 4,
    "traceLevel": "none",
    "safetyCaps": {"dominant": 100_000, "powerTerms": 20_000, "pairBudget": 200},
}


def _require(cond, msg):
    if not cond:
        raise DocumentError(msg)


def load_system(doc):
    """Build a ``System`` from a parsed system document."""
    _require(isinstance(doc, dict), "document must be an object")
    vdocs = doc.get("vertices")
    _require(isinstance(vdocs, list) and vdocs, "document needs a vertex list")
    vertices, index = [], {}
    for vd in vdocs:
        name = vd.get("name")
        _require(isinstance(name, str), "vertex without a name")
        _require(name not in index, f"duplicate vertex name {name!r}")
        variables = vd.get("vars", [])
        _require(len(set(variables)) == len(variables),
                 f"repeated variable in vertex {name!r}")
        try:
            gens = [parse_polynomial(s, variables) for s in vd.get("ideal", [])]
            v = Variety(name, variables, gens)
        except ParseError as exc:
            raise DocumentError(f"vertex {name}: {exc}") from exc
        index[name] = len(vertices)
        vertices.append(v)
    arrows, names = [], set()
    for ad in doc.get("arrows", []):
        name = ad.get("name")
        _require(isinstance(name, str), "arrow without a name")
        _require(name not in names and name not in index,
                 f"duplicate name {name!r}")
        names.add(name)
        for end in ("src", "dst"):
            _require(ad.get(end) in index, f"arrow {name}: unknown {end} {ad.get(end)!r}")
        s, d = index[ad["src"]], index[ad["dst"]]
        coords = ad.get("coords", [])
        _require(len(coords) == vertices[d].nvars,
                 f"arrow {name}: {len(coords)} coords for a target with "
                 f"{vertices[d].nvars} variables")
        try:
            polys = [parse_polynomial(c, vertices[s].vars) for c in coords]
            m = Morphism(vertices[s], vertices[d], polys)
        except VarcatError as exc:
            raise DocumentError(f"arrow {name}: {exc}") from exc
        arrows.append(Arrow(name, s, d, m))
    return System(vertices, arrows)


def options(doc, **overrides):
    opts = dict(OPTION_DEFAULTS)
    opts["safetyCaps"] = dict(OPTION_DEFAULTS["safetyCaps"])
    given = doc.get("options", {}) or {}
    for k, v in given.items():
        if k == "safetyCaps":
            opts["safetyCaps"].update(v)
        else:
            opts[k] = v
    for k, v in overrides.items():
        if v is not None:
            opts[k] = v
    return opts


def decider_config(opts):
    caps = opts["safetyCaps"]
    return DeciderConfig(prime_bound=opts["primeBound"],
                         pointset_cap=opts["pointSetCap"],
                         power_term_cap=caps.get("powerTerms", 20_000),
                         dominant_cap=caps.get("dominant", 100_000))


def system_to_doc(system):
    return {
        "vertices": [{"name": v.name, "vars": list(v.vars),
                      "ideal": [format_poly(g, v.vars) for g in v.ideal.generators]}
                     for v in system.vertices],
        "arrows": [{"name": a.name, "src": system.vertices[a.src].name,
                    "dst": system.vertices[a.dst].name,
                    "coords": a.morphism.coords_str()} for a in system.arrows],
    }


# -- verdicts ------------------------------------------------------------

def _variety_doc(v):
    return {"name": v.name, "vars": list(v.vars), "ideal": v.generators_str()}


def _telt_doc(x):
    return [x.u, *x.b]


def certificate_doc(cert):
    out = {"kind": cert.kind,
           "probes": [{"prime": p, "point": list(pt)} for p, pt in cert.probes]}
    if cert.kind == "non_bijective":
        out["prime"] = cert.prime
        out["points"] = [[_telt_doc(x) for x in pt] for pt in cert.points]
    else:
        out["exponent"] = cert.exponent
        out["power"] = cert.power.coords_str()
    return out


def witness_doc(w, system):
    inner = {
        "kind": w.kind,
        "vertex": system.vertices[w.vertex].name,
        "chain": [_variety_doc(z) for z in w.chain],
        "word": list(w.word),
        "wordText": word_str(w.word),
        "morphism": w.morphism.coords_str(),
        "certificate": certificate_doc(w.certificate),
    }
    if w.collision:
        c = w.collision
        inner["collision"] = {"f": list(c["f_word"]), "g": list(c["g_word"]),
                              "gOrder": c["g_order"],
                              "fText": word_str(c["f_word"]),
                              "gText": word_str(c["g_word"])}
    if w.path:
        return {"kind": "SubsystemInfinite", "path": list(w.path), "inner": inner}
    return inner


def witness_from_doc(doc, system):
    """Inverse of ``witness_doc`` relative to the same system."""
    path = ()
    if doc.get("kind") == "SubsystemInfinite":
        path = tuple(doc["path"])
        doc = doc["inner"]
    names = [v.name for v in system.vertices]
    _require(doc.get("vertex") in names, "witness names an unknown vertex")
    vertex = names.index(doc["vertex"])
    chain = []
    for zd in doc.get("chain", []):
        gens = [parse_polynomial(s, zd["vars"]) for s in zd["ideal"]]
        chain.append(Variety(zd["name"], zd["vars"], gens))
    final = chain[-1] if chain else system.vertices[vertex]
    morph = Morphism(final, final,
                     [parse_polynomial(s, final.vars) for s in doc["morphism"]],
                     check=False)
    cd = doc["certificate"]
    probes = tuple((p["prime"], tuple(p["point"])) for p in cd["probes"])
    if cd["kind"] == "non_bijective":
        pts = tuple(tuple(TElt(x[0], tuple(x[1:])) for x in pt) for pt in cd["points"])
        cert = InfiniteOrder("non_bijective", probes, prime=cd["prime"], points=pts)
    else:
        pw = Morphism(final, final,
                      [parse_polynomial(s, final.vars) for s in cd["power"]],
                      check=False)
        cert = InfiniteOrder(cd["kind"], probes, exponent=cd["exponent"], power=pw)
    collision = None
    if "collision" in doc:
        c = doc["collision"]
        collision = {"f_word": tuple(c["f"]), "g_word": tuple(c["g"]),
                     "g_order": c["gOrder"]}
    return Witness(doc["kind"], vertex, tuple(chain), tuple(doc["word"]), morph,
                   cert, collision, path)


def hom_table_doc(table, system):
    rows = []
    for e in table.entries:
        rows.append({"source": system.vertices[e.src].name,
                     "target": system.vertices[e.dst].name,
                     "coords": e.morphism.coords_str(),
                     "word": word_str(table.root_word(e))})
    rows.sort(key=lambda r: (r["source"], r["target"], r["coords"]))
    return rows


def verdict_doc(verdict, system, diagnostics=None):
    out = {}
    if verdict.finite:
        out["verdict"] = "finite"
        out["order"] = verdict.order
        out["homTable"] = hom_table_doc(verdict.table, system)
    else:
        out["verdict"] = "infinite"
        out["witness"] = witness_doc(verdict.witness, system)
    if diagnostics is not None:
        out["diagnostics"] = diagnostics
    return out


def aborted_doc(exc, diagnostics=None):
    diag = dict(diagnostics or {})
    diag["error"] = type(exc).__name__
    diag["message"] = str(exc)
    extra = getattr(exc, "diagnostics", None)
    if extra:
        diag["details"] = extra
    return {"verdict": "aborted", "diagnostics": diag}


# -- orbit reports ---------------------------------------------------------

def point_doc(pt):
    return [str(Fraction(c)) for c in pt]


def parse_point(values):
    return tuple(parse_rational(str(v)) for v in values)
