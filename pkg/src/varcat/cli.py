"""Command line entry point: ``varcat decide|orbit|check``.

Exit statuses for ``decide``: 0 finite, 10 infinite, 20 aborted (no probe,
caps), 1 input error.  ``orbit`` and ``check`` return 0 or 1.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor

from .decider import Decider, validate_witness
from .documents import (aborted_doc, decider_config, load_system, options,
                        parse_point, point_doc, verdict_doc, witness_from_doc)
from .dynamics import (MonoidAction, component_system, cyclic_periodicity,
                       m_periodicity, orbit_bfs, pair_criterion_probe)
from .errors import DocumentError, InvalidWitness, NotWellDefined, VarcatError
from .geometry import Variety
from .parsing import parse_polynomial
from .quiver import bfs_closure

EXIT_FINITE, EXIT_INPUT, EXIT_INFINITE, EXIT_ABORTED = 0, 1, 10, 20

def setup_logging(level):
    levels = {"none": logging.WARNING, "steps": logging.INFO, "full": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", force=True)


def run_decide(doc, timings=False, **overrides):
    """Decide a system document.  Returns ``(exit_status, verdict_document)``."""
    try:
        system = load_system(doc)
        opts = options(doc, **overrides)
    except (DocumentError, VarcatError, KeyError, TypeError) as exc:
        return EXIT_INPUT, {"verdict": "error",
                            "diagnostics": {"error": type(exc).__name__,
                                            "message": str(exc)}}
    decider = Decider(decider_config(opts))
    diag = {"primeBound": opts["primeBound"], "pointSetCap": opts["pointSetCap"]}
    t0 = time.perf_counter()
    try:
        verdict = decider.decide_system(system)
    except VarcatError as exc:
        diag.update(decider.diagnostics)
        return EXIT_ABORTED, aborted_doc(exc, diag)
    diag.update(decider.diagnostics)
    if timings:
        diag["seconds"] = round(time.perf_counter() - t0, 3)
    out = verdict_doc(verdict, system, diag)
    return (EXIT_FINITE if verdict.finite else EXIT_INFINITE), out


def run_orbit(doc, vertex=None, point=None, generators=None, pairs=False,
              **overrides):
    """Orbit report for a base point on one vertex of a system document."""
    system = load_system(doc)
    opts = options(doc, **overrides)
    orbit_opts = doc.get("orbit", {}) or {}
    vname = vertex or orbit_opts.get("vertex") or system.vertices[0].name
    names = [v.name for v in system.vertices]
    if vname not in names:
        raise DocumentError(f"unknown vertex {vname!r}")
    vi = names.index(vname)
    variety = system.vertices[vi]
    if point is None:
        point = orbit_opts.get("point")
    if point is None:
        raise DocumentError("no base point given")
    gen_names = generators or orbit_opts.get("generators")
    if gen_names is None:
        gen_names = [a.name for a in system.arrows if a.src == vi and a.dst == vi]
    gens = []
    for g in gen_names:
        try:
            a = system.arrow(g)
        except StopIteration:
            raise DocumentError(f"unknown arrow {g!r}") from None
        if a.src != vi or a.dst != vi:
            raise NotWellDefined(f"arrow {g} is not an endomorphism of {vname}")
        gens.append(a.morphism)
    action = MonoidAction(variety, gens, parse_point(point), list(gen_names))
    budget = opts["orbitBudget"]
    rep = orbit_bfs(action, budget)
    out = {
        "vertex": vname,
        "basePoint": point_doc(action.point),
        "generators": list(gen_names),
        "orbit": {"size": rep.size, "complete": rep.complete,
                  "budgetUsed": rep.budget_used,
                  "points": [point_doc(p) for p in rep.points]},
        "mPeriodic": m_periodicity(rep) if rep.complete else None,
        "cyclic": {},
    }
    for name, f in zip(gen_names, gens):
        res = cyclic_periodicity(f, action.point, budget)
        entry = {"status": res.status}
        if res.status == "periodic":
            entry["period"] = res.period
        elif res.status == "preperiodic":
            entry.update(tail=res.tail, period=res.period)
        else:
            entry["steps"] = res.steps
        out["cyclic"][name] = entry
    if pairs:
        pr = pair_criterion_probe(action, opts["wordRadius"],
                                  opts["safetyCaps"].get("pairBudget", 200), budget)
        out["pairProbe"] = {
            "wordRadius": opts["wordRadius"],
            "elements": pr.words,
            "maxCyclicOrbit": pr.max_cyclic,
            "maxPairOrbit": pr.max_pair,
            "unboundedCyclic": [{"f": f, "g": g} for f, g in pr.cyclic_witnesses],
            "unboundedPairs": [{"f": f, "g": g} for f, g in pr.pair_witnesses],
            "orbitComplete": pr.orbit_complete,
            "consistent": pr.consistent,
        }
    if orbit_opts.get("components"):
        comps = [Variety(f"Z{i}", variety.vars,
                         [parse_polynomial(g, variety.vars) for g in ideal])
                 for i, ideal in enumerate(orbit_opts["components"])]
        sub = component_system(action, comps)
        verdict = Decider(decider_config(opts)).decide_system(sub)
        out["componentSystem"] = verdict_doc(verdict, sub)
    return out


def run_check(doc, verdict):
    """Re-validate a verdict document against its system document."""
    system = load_system(doc)
    opts = options(doc)
    if verdict.get("verdict") == "finite":
        table, _ = bfs_closure(system, cap=verdict["order"] + 1)
        if not table.complete or len(table) != verdict["order"]:
            raise InvalidWitness("recount of the hom table disagrees with the order")
        if len(verdict.get("homTable", [])) != verdict["order"]:
            raise InvalidWitness("hom table listing has the wrong length")
        return True
    if verdict.get("verdict") == "infinite":
        w = witness_from_doc(verdict["witness"], system)
        return validate_witness(w, system, decider_config(opts))
    raise InvalidWitness(f"nothing to check for verdict {verdict.get('verdict')!r}")


def dumps(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".varcat-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _decide_file(args):
    path, timings, overrides = args
    try:
        doc = _read(path)
    except (OSError, json.JSONDecodeError) as exc:
        return EXIT_INPUT, {"verdict": "error",
                            "diagnostics": {"error": type(exc).__name__,
                                            "message": str(exc)}}
    return run_decide(doc, timings=timings, **overrides)


def _emit(text, out):
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def build_parser():
    p = argparse.ArgumentParser(prog="varcat", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime-bound", type=int, default=None)
    common.add_argument("--pointset-cap", type=int, default=None)
    common.add_argument("--orbit-budget", type=int, default=None)
    common.add_argument("--word-radius", type=int, default=None)
    common.add_argument("--trace", choices=["none", "steps", "full"], default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", parents=[common],
                       help="decide finiteness of the generated category")
    d.add_argument("documents", nargs="+")
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (output no longer reproducible)")

    o = sub.add_parser("orbit", parents=[common], help="orbit and periodicity report")
    o.add_argument("document")
    o.add_argument("--vertex")
    o.add_argument("--point", help="comma separated rationals, e.g. 1,-1/2")
    o.add_argument("--generators", help="comma separated arrow names")
    o.add_argument("--pairs", action="store_true",
                   help="also run the pair/cyclic criterion probe")

    c = sub.add_parser("check", help="re-validate a verdict document")
    c.add_argument("document")
    c.add_argument("verdict")
    return p


def _overrides(args):
    return {"primeBound": args.prime_bound, "pointSetCap": args.pointset_cap,
            "orbitBudget": args.orbit_budget, "wordRadius": args.word_radius}


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(getattr(args, "trace", None) or "none")

    if args.command == "decide":
        overrides = _overrides(args)
        jobs = [(path, args.timings, overrides) for path in args.documents]
        if len(jobs) > 1 and args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                results = list(pool.map(_decide_file, jobs))
        else:
            results = [_decide_file(j) for j in jobs]
        if len(results) == 1:
            status, out = results[0]
            _emit(dumps(out), args.out)
            return status
        _emit(dumps([out for _, out in results]), args.out)
        for code in (EXIT_INPUT, EXIT_ABORTED, EXIT_INFINITE):
            if any(s == code for s, _ in results):
                return code
        return EXIT_FINITE

    if args.command == "orbit":
        try:
            doc = _read(args.document)
            point = args.point.split(",") if args.point else None
            gens = args.generators.split(",") if args.generators else None
            report = run_orbit(doc, args.vertex, point, gens, args.pairs,
                               **_overrides(args))
        except (OSError, json.JSONDecodeError, VarcatError, KeyError) as exc:
            sys.stderr.write(f"varcat: {type(exc).__name__}: {exc}\n")
            return EXIT_INPUT
        _emit(dumps(report), args.out)
        return 0

    if args.command == "check":
        try:
            run_check(_read(args.document), _read(args.verdict))
        except InvalidWitness as exc:
            sys.stderr.write(f"invalid: {exc}\n")
            return EXIT_INPUT
        except (OSError, json.JSONDecodeError, VarcatError, KeyError) as exc:
            sys.stderr.write(f"varcat: {type(exc).__name__}: {exc}\n")
            return EXIT_INPUT
        sys.stdout.write("valid\n")
        return 0
    return EXIT_INPUT  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
