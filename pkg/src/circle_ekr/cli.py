"""Command-line front end.

Exit codes: 0 success, 1 a claimed value was not reproduced, 2 usage
error, 3 a search budget ran out.  Output is deterministic; wall-clock
times are only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import geometry as geo
from . import polyfam as pf
from . import scheme as sc
from . import search as se
from .errors import BadArguments, BudgetExceeded, NotAPrimePower, UnsupportedOrder, WrongParity
from .gf import field_create, prime_power
from .quadset import elliptic_quadric, hyperbolic_quadric, hyperoval_base, oval_cone, quadric_cone, suzuki_tits

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
OUT_DIR_ENV = "CIRCLE_EKR_OUT"

FAMILIES = (geo.MOBIUS, geo.LAGUERRE, geo.MINKOWSKI, geo.LAGUERRE_PLUS)
MODELS = {
    geo.MOBIUS: ("elliptic", "suzuki_tits"),
    geo.LAGUERRE: ("cone", "poly", "hyperoval"),
    geo.LAGUERRE_PLUS: ("cone", "hyperoval"),
    geo.MINKOWSKI: ("hyperbolic", "pgl"),
}

TABLE2 = {3: 4, 5: 7, 7: 10, 9: 13, 11: 19, 13: 19}
TABLE3 = {2: 1, 3: 2, 4: 4, 5: 5, 7: 8, 8: 10, 9: 12, 11: 17, 13: 17, 16: 28, 17: 23}
EXTENDED_FROM = 11


class Usage(Exception):
    pass


# -- geometry selection --------------------------------------------------------


def build_geometry(family: str, q: int, model: str | None = None) -> geo.CircleGeometry:
    F = field_create(q)
    model = model or MODELS[family][0]
    if model not in MODELS[family]:
        raise Usage(f"model {model!r} is not available for {family}; choose from {MODELS[family]}")
    if model == "hyperoval" and F.p != 2:
        raise WrongParity(f"hyperoval bases need even q, got {q}")
    if family == geo.MOBIUS:
        Q = elliptic_quadric(F) if model == "elliptic" else suzuki_tits(F)
        return geo.from_quadratic_set(Q)
    if family in (geo.LAGUERRE, geo.LAGUERRE_PLUS):
        if family == geo.LAGUERRE_PLUS and F.p != 2:
            raise WrongParity(f"laguerre_plus needs even q, got {q}")
        if model == "poly":
            return geo.laguerre_polynomial_model(F)
        Q = quadric_cone(F) if model == "cone" else oval_cone(F, hyperoval_base(F), "hyperoval minus a point")
        G = geo.from_quadratic_set(Q)
        return geo.laguerre_plus(G) if family == geo.LAGUERRE_PLUS else G
    if model == "pgl":
        return geo.minkowski_pgl_model(F)
    return geo.from_quadratic_set(hyperbolic_quadric(F))


def claimed_family(G: geo.CircleGeometry) -> str | None:
    """Closed-form table that applies to this geometry, if any."""
    even = G.q % 2 == 0
    if G.kind == geo.MOBIUS and even and G.model.startswith("elliptic"):
        return sc.MOBIUS_EVEN
    if G.kind == geo.LAGUERRE and not even:
        return sc.LAGUERRE_ODD
    if G.kind == geo.LAGUERRE_PLUS:
        return sc.LAGUERRE_PLUS_EVEN
    if G.kind == geo.MINKOWSKI and even:
        return sc.MINKOWSKI_EVEN
    return None


# -- output --------------------------------------------------------------------


class Emitter:
    def __init__(self, args):
        self.args = args
        self.t0 = time.monotonic()

    def provenance(self, G: geo.CircleGeometry | None = None, budget: se.SearchBudget | None = None) -> dict:
        doc = {"tool": "circle-ekr", "version": __version__, "command": self.args.command_line}
        if G is not None:
            doc["geometry"] = {"kind": G.kind, "order": G.q, "model": G.model, "hash": G.fingerprint()}
        if budget is not None:
            doc["budget"] = {"nodes": budget.nodes, "seconds": budget.seconds}
        if self.args.timing:
            doc["wall_time_ms"] = int((time.monotonic() - self.t0) * 1000)
        return doc

    def _target(self, default_name: str) -> Path | None:
        if self.args.output:
            return Path(self.args.output)
        d = os.environ.get(OUT_DIR_ENV)
        if d:
            return Path(d) / default_name
        return None

    def json(self, doc: dict, name: str) -> None:
        text = json.dumps(doc, indent=2, default=_jsonable) + "\n"
        self._write(text, name + ".json")

    def csv(self, text: str, meta: dict, name: str) -> None:
        path = self._write(text, name + ".csv")
        side = json.dumps(meta, indent=2, default=_jsonable) + "\n"
        if path is not None:
            path.with_suffix(path.suffix + ".meta.json").write_text(side)
        else:
            sys.stderr.write(side)

    def text(self, lines: list[str], name: str) -> None:
        self._write("\n".join(lines) + "\n", name + ".txt")

    def _write(self, text: str, name: str) -> Path | None:
        path = self._target(name)
        if path is None:
            sys.stdout.write(text)
            return None
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
        return path


def _jsonable(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _budget(args) -> se.SearchBudget:
    return se.SearchBudget(nodes=args.nodes, seconds=args.seconds)


def _emit(out: Emitter, args, doc: dict, name: str, lines: list[str]) -> None:
    if args.format == "text":
        out.text(lines, name)
    else:
        out.json(doc, name)


# -- geometry commands ------------------------------------------------------------


def cmd_geometry_build(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    doc = geo.to_json(G)
    doc["provenance"] = out.provenance(G)
    _emit(out, args, doc, f"geometry_{G.kind}_{G.q}",
          [f"{G.kind} q={G.q} model={G.model}", f"points {G.n_points}", f"circles {G.n_circles}"])
    return EXIT_OK


def count_check(G: geo.CircleGeometry) -> dict:
    if G.kind == geo.LAGUERRE_PLUS:
        q = G.q
        exp = {"points": q * (q + 1) + q, "circles": q**3, "classes": q + 2, "circle_size": q + 2}
        got = {"points": G.n_points, "circles": G.n_circles, "classes": len(G.parallel[0]),
               "circle_size": len(G.circles[0])}
    else:
        e = geo.expected_counts(G.kind, G.q)
        exp = {"points": e["points"], "circles": e["circles"], "relations": e["relations"],
               "classes": e["classes_per_relation"], "circles_per_point": e["circles_per_point"]}
        got = {"points": G.n_points, "circles": G.n_circles, "relations": len(G.parallel),
               "classes": len(G.parallel[0]) if G.parallel else 0,
               "circles_per_point": sorted({m.bit_count() for m in G.point_circles})}
        got["circles_per_point"] = got["circles_per_point"][0] if len(got["circles_per_point"]) == 1 else got["circles_per_point"]
    return {"expected": exp, "got": got, "ok": exp == got}


def cmd_geometry_validate(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    counts = count_check(G)
    doc = {"counts": counts}
    ok = counts["ok"]
    if G.kind != geo.LAGUERRE_PLUS:
        rep = geo.validate(G)
        doc["axioms"] = rep.as_dict()
        ok = ok and rep.ok
    else:
        sizes = sorted({int(v) for v in set(G.intersections.ravel())})
        doc["intersection_sizes"] = sizes
        ok = ok and set(sizes) <= {0, 2, G.q + 2}
    doc["ok"] = ok
    doc["provenance"] = out.provenance(G)
    _emit(out, args, doc, f"validate_{G.kind}_{G.q}", [f"{G.kind} q={G.q}: {'ok' if ok else 'FAILED'}"])
    return EXIT_OK if ok else EXIT_MISMATCH


# -- scheme commands -----------------------------------------------------------------


def _scheme_claims(G, A: sc.Analysis) -> tuple[list[dict], dict]:
    """Mismatches against the closed forms, plus extra facts for odd-order Minkowski planes."""
    fam = claimed_family(G)
    extra: dict = {}
    if fam is not None:
        return sc.tensor_diff(A.report, fam, G.q), extra
    if G.kind == geo.MINKOWSKI:
        count = sc.distinct_eigenvalue_count(A.relations.matrices[A.relations.index(3)])
        extra["disjointness_distinct_eigenvalues"] = count
        diff = []
        if A.report.is_scheme:
            diff.append({"field": "is_scheme", "expected": False, "got": True})
        if G.q >= 5 and count != 5:
            diff.append({"field": "disjointness_distinct_eigenvalues", "expected": 5, "got": count})
        return diff, extra
    return [], extra


def cmd_scheme_check(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    A = sc.analyze(G)
    diff, extra = _scheme_claims(G, A)
    doc = sc.scheme_json(G, A, sc.tensor_identities(A.report) if A.report.is_scheme else {})
    doc.update(extra)
    doc["claim_family"] = claimed_family(G)
    doc["diff"] = diff
    doc["provenance"] = out.provenance(G)
    _emit(out, args, doc, f"scheme_{G.kind}_{G.q}",
          [f"is_scheme {A.report.is_scheme}", f"valencies {list(A.report.valencies)}", f"diff {diff}"])
    return EXIT_MISMATCH if diff else EXIT_OK


def _require_scheme(A: sc.Analysis) -> None:
    if A.eigen is None:
        raise Usage("the relations do not form an association scheme for this geometry")


def cmd_scheme_eigen(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    A = sc.analyze(G)
    _require_scheme(A)
    fam = claimed_family(G)
    check = sc.verify_closed_forms(A.eigen, fam, G.q) if fam else sc.TableCheck(True)
    doc = {"labels": list(A.eigen.labels)}
    doc.update(A.eigen.as_dict())
    doc["claim_family"] = fam
    doc["diff"] = check.diff
    doc["provenance"] = out.provenance(G)
    _emit(out, args, doc, f"eigen_{G.kind}_{G.q}",
          [f"P {A.eigen.P}", f"multiplicities {A.eigen.multiplicities}", f"diff {check.diff}"])
    return EXIT_OK if check.ok else EXIT_MISMATCH


def cmd_scheme_identities(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    A = sc.analyze(G)
    R = A.relations
    ids: dict[str, bool] = {}
    if A.eigen is not None:
        E = A.eigen
        ids["PQ=nI"] = sc.pq_identity(E)
        ids["A_i T_x = T_x B_i"] = sc.intersection_matrix_check(R, A.report, E)
        for i, lab in enumerate(E.labels):
            ids[f"spectral_closure_A{lab}"] = sc.spectral_closure(R.matrices[i], E.column(lab))
        ids["trace_powers"] = sc.trace_identities(R, E)
        ids.update(sc.tensor_identities(A.report))
    inc = sc.incidence_identities(G, R)
    ids.update(inc.identities)
    exp_rank = sc.expected_rank(G.kind, G.q)
    if exp_rank is not None:
        ids["rank(W)"] = inc.rank == exp_rank
    doc = {"identities": ids, "rank": inc.rank, "expected_rank": exp_rank, "provenance": out.provenance(G)}
    ok = all(ids.values())
    _emit(out, args, doc, f"identities_{G.kind}_{G.q}",
          [f"{k}: {v}" for k, v in ids.items()] + [f"rank {inc.rank}"])
    return EXIT_OK if ok else EXIT_MISMATCH


# -- bounds ----------------------------------------------------------------------


def _parse_weights(text: str) -> dict[int, Fraction]:
    out = {}
    for part in text.split(","):
        lab, _, w = part.partition(":")
        try:
            out[int(lab)] = Fraction(w or "1")
        except ValueError:
            raise Usage(f"bad weight {part!r}; use label:weight, e.g. 1:3/1,3:1") from None
    return out


def expected_hoffman(G, weights: dict[int, Fraction]) -> Fraction | None:
    q = G.q
    if weights == {3: 1}:
        return {sc.MOBIUS_EVEN: q * (q + 1), sc.LAGUERRE_ODD: q * q, sc.LAGUERRE_PLUS_EVEN: q * q,
                sc.MINKOWSKI_EVEN: q * (q - 1)}.get(claimed_family(G))
    if claimed_family(G) == sc.MOBIUS_EVEN and weights == {1: Fraction(q + 2, 2), 3: 1}:
        return Fraction(q * (q + 1), 2) + 1
    return None


def cmd_bound(args, out: Emitter) -> int:
    if args.kind == "clique-coclique":
        if args.n is None or args.clique is None:
            raise Usage("clique-coclique needs --n and --clique")
        val = sc.clique_coclique_bound(args.n, args.clique)
        doc = {"bound": val, "n": args.n, "clique": args.clique, "provenance": out.provenance()}
        _emit(out, args, doc, "bound_clique_coclique", [str(val)])
        return EXIT_OK
    if args.family is None or args.q is None:
        raise Usage(f"{args.kind} needs --family and --q")
    G = build_geometry(args.family, args.q, args.model)
    A = sc.analyze(G)
    _require_scheme(A)
    if args.kind == "hoffman":
        weights = _parse_weights(args.weights)
        val = sc.hoffman_bound(A.eigen, weights)
        exp = expected_hoffman(G, weights)
        doc = {"bound": val, "weights": {str(k): v for k, v in weights.items()}}
    else:
        allowed = sorted(int(x) for x in args.allowed.split(","))
        val = sc.delsarte_lp_bound(A.eigen, allowed)
        exp = Fraction(G.q * G.q + 1, 2) if claimed_family(G) == sc.LAGUERRE_ODD and allowed == [0, 2] else None
        doc = {"bound": val, "allowed": allowed}
    doc["expected"] = exp
    doc["match"] = None if exp is None else val == exp
    doc["provenance"] = out.provenance(G)
    _emit(out, args, doc, f"bound_{args.kind}_{G.kind}_{G.q}", [f"{val}", f"expected {exp}"])
    return EXIT_MISMATCH if doc["match"] is False else EXIT_OK


# -- EKR ---------------------------------------------------------------------------


def expected_max(G, t: int) -> int | None:
    q = G.q
    if t == 1:
        if G.kind == geo.LAGUERRE_PLUS:
            return None
        return se.circles_per_point(G)
    if G.kind == geo.LAGUERRE and q % 2:
        return TABLE2.get(q)
    if G.kind == geo.LAGUERRE:
        return q
    if G.kind == geo.LAGUERRE_PLUS:
        return q * q
    if G.kind == geo.MINKOWSKI:
        return TABLE3.get(q)
    if G.kind == geo.MOBIUS and G.model.startswith("elliptic") and q <= 9 and q % 2 == 0:
        return 2 * q
    return None


def _witness_doc(G, t, ws, budget, out) -> dict:
    doc = se.result_json(G, t, ws, budget)
    doc["provenance"] = out.provenance(G, budget)
    return doc


def _check_extended(args, q: int) -> None:
    if q >= EXTENDED_FROM and not args.extended:
        raise Usage(f"q = {q} is in the long-running tier; pass --extended")


def cmd_ekr_search(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    _check_extended(args, G.q)
    budget = _budget(args)
    try:
        W = se.max_t_intersecting(G, args.t, budget)
    except BudgetExceeded as e:
        doc = _witness_doc(G, args.t, [e.result], budget, out)
        _emit(out, args, doc, f"search_{G.kind}_{G.q}_t{args.t}", [f"budget exhausted; best {e.result.size}"])
        return EXIT_BUDGET
    exp = expected_max(G, args.t)
    doc = _witness_doc(G, args.t, [W], budget, out)
    doc["expected"] = exp
    if G.kind == geo.MOBIUS and args.t == 2:
        doc["upper_bound"] = Fraction(G.q * (G.q + 1), 2) + 1
    ok = exp is None or W.size == exp
    _emit(out, args, doc, f"search_{G.kind}_{G.q}_t{args.t}",
          [f"size {W.size} optimal {W.optimal} label {W.tag}", f"expected {exp}"])
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_ekr_classify(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    try:
        circles = [int(c) for c in args.circles.split(",") if c.strip()]
    except ValueError:
        raise Usage("--circles takes comma-separated circle ids") from None
    if any(not 0 <= c < G.n_circles for c in circles):
        raise Usage(f"circle ids must lie in [0, {G.n_circles})")
    W = se.classify_family(G, circles)
    doc = {"label": W.tag, "size": W.size, "intersecting": se.recheck_intersecting(G, circles),
           "provenance": out.provenance(G)}
    _emit(out, args, doc, f"classify_{G.kind}_{G.q}", [W.tag])
    return EXIT_OK


def expected_enumeration(G) -> dict[str, int] | None:
    if G.kind == geo.LAGUERRE and G.q == 2:
        return None
    exp = {se.PENCIL: G.n_points}
    if G.kind == geo.LAGUERRE and G.q % 2 == 0:
        exp[se.NUCLEUS] = G.q
    return dict(sorted(exp.items()))


def cmd_ekr_enumerate(args, out: Emitter) -> int:
    G = build_geometry(args.family, args.q, args.model)
    size = args.size or se.circles_per_point(G)
    budget = _budget(args)
    try:
        ws = se.enumerate_maximum_intersecting(G, size, budget)
    except BudgetExceeded as e:
        doc = {"partial": [list(c) for c in e.result], "provenance": out.provenance(G, budget)}
        _emit(out, args, doc, f"enumerate_{G.kind}_{G.q}", ["budget exhausted"])
        return EXIT_BUDGET
    counts = se.label_counts(ws)
    recheck = all(se.recheck_intersecting(G, w.circles) for w in ws)
    exp = expected_enumeration(G)
    if G.kind == geo.LAGUERRE and G.q == 2:
        ok = len(ws) == 16
    else:
        ok = exp == counts
    doc = _witness_doc(G, 1, ws, budget, out)
    doc.update({"count": len(ws), "labels": counts, "expected_labels": exp, "recheck": recheck})
    _emit(out, args, doc, f"enumerate_{G.kind}_{G.q}", [f"{len(ws)} families {counts}"])
    return EXIT_OK if ok and recheck else EXIT_MISMATCH


# -- polynomials -------------------------------------------------------------------


def cmd_poly_max(args, out: Emitter) -> int:
    space = pf.PolySpace(field_create(args.q), args.k)
    r = pf.max_t_intersecting_polys(space, args.t, _budget(args))
    if not (r.clique.optimal and r.coclique.optimal):
        doc = {"clique": r.clique.size, "coclique": r.coclique.size, "optimal": False}
        _emit(out, args, doc, "poly_max", ["budget exhausted"])
        return EXIT_BUDGET
    if args.format == "csv":
        out.csv(pf.poly_csv([r]), out.provenance(budget=_budget(args)), f"poly_max_{args.q}_{args.k}_{args.t}")
    else:
        doc = {"q": r.q, "k": r.k, "t": r.t, "max_size": r.clique.size, "bound": r.bound,
               "max_non_t_intersecting": r.coclique.size, "coclique_bound": r.coclique_bound,
               "witness": list(r.clique.circles), "match": r.match,
               "provenance": out.provenance(budget=_budget(args))}
        _emit(out, args, doc, f"poly_max_{args.q}_{args.k}_{args.t}",
              [f"max {r.clique.size} (bound {r.bound}); coclique {r.coclique.size} (bound {r.coclique_bound})"])
    return EXIT_OK if r.match else EXIT_MISMATCH


def cmd_poly_ekr(args, out: Emitter) -> int:
    space = pf.PolySpace(field_create(args.q), args.k)
    try:
        ws = pf.strong_ekr_polys(space, _budget(args))
    except BudgetExceeded:
        _emit(out, args, {"optimal": False}, "poly_ekr", ["budget exhausted"])
        return EXIT_BUDGET
    q = args.q
    labels = sorted(divmod(w.anchor, q) for w in ws if w.label == "F")
    ok = len(ws) == q * q and len(labels) == q * q
    doc = {"q": q, "k": args.k, "count": len(ws), "families": [{"x": x, "y": y} for x, y in labels],
           "all_F_xy": len(labels) == len(ws), "provenance": out.provenance(budget=_budget(args))}
    _emit(out, args, doc, f"poly_ekr_{q}_{args.k}", [f"{len(ws)} families, all F_xy: {doc['all_F_xy']}"])
    return EXIT_OK if ok else EXIT_MISMATCH


def _table1(args, out: Emitter, qs: list[int]) -> int:
    rows = []
    for q in qs:
        F = field_create(q)
        if F.p == 2:
            raise Usage(f"the table1 counts need odd q, got {q}")
        rows.extend(pf.table1(F))
    rootless_ok = all(pf.rootless_count(field_create(q), x, y) == q * (q - 1) // 2
                      for q in qs for x in range(q + 1) for y in range(1, q))
    ok = all(r.match for r in rows) and rootless_ok
    meta = out.provenance()
    meta.update({"rootless_ok": rootless_ok, "match": ok})
    if args.format == "csv":
        out.csv(pf.table1_csv(rows), meta, "table1")
    else:
        doc = {"rows": [{"q": r.q, "class": r.cls, "m": list(r.m), "cases": r.cases, "match": r.match}
                        for r in rows], "rootless_ok": rootless_ok, "provenance": meta}
        _emit(out, args, doc, "table1", [f"{r.q} {r.cls} {r.m} {r.match}" for r in rows])
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_poly_table1(args, out: Emitter) -> int:
    return _table1(args, out, [args.q])


# -- tables -------------------------------------------------------------------------


def _search_table(args, out: Emitter, family: str, table: dict[int, int], bound_fn, name: str) -> int:
    budget = _budget(args)
    rows, ok, exhausted = [], True, False
    for q in sorted(table):
        if q > args.max_q:
            continue
        _check_extended(args, q)
        G = build_geometry(family, q)
        t0 = time.monotonic()
        try:
            W = se.max_t_intersecting(G, 2, budget)
        except BudgetExceeded as e:
            W, exhausted = e.result, True
        ms = int((time.monotonic() - t0) * 1000)
        rows.append(se.TableRow(q, W.size, bound_fn(q), ms, W.optimal))
        ok = ok and W.optimal and W.size == table[q]
    meta = out.provenance(budget=budget)
    meta["rows"] = [{"q": r.q, "expected": table[r.q], "optimal": r.optimal} for r in rows]
    if args.format == "csv":
        out.csv(se.table_csv(rows, args.timing), meta, name)
    else:
        doc = {"rows": [{"q": r.q, "size": r.size, "bound": r.bound, "expected": table[r.q], "optimal": r.optimal}
                        for r in rows], "provenance": meta}
        _emit(out, args, doc, name, [f"{r.q} {r.size}" for r in rows])
    if exhausted:
        return EXIT_BUDGET
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_tables(args, out: Emitter) -> int:
    if args.table == "table1":
        qs = [q for q in (5, 7, 9, 11, 13) if q <= args.max_q] if args.max_q else [5, 7]
        return _table1(args, out, qs)
    max_q = args.max_q or 9
    args.max_q = max_q
    if args.table == "table2":
        return _search_table(args, out, geo.LAGUERRE, TABLE2, lambda q: (q * q - 1) // 2, "table2")
    return _search_table(args, out, geo.MINKOWSKI, TABLE3,
                         lambda q: (q + 1) * (q - 2) // 2 if q > 2 else "", "table3")


# -- parser -------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, geometry: bool = True) -> None:
    if geometry:
        p.add_argument("--family", choices=FAMILIES, required=True)
        p.add_argument("--q", type=int, required=True)
        p.add_argument("--model", default=None, help="construction model (see README)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--output", default=None, help="write here instead of stdout")
    p.add_argument("--nodes", type=int, default=10**8, help="search node budget")
    p.add_argument("--seconds", type=float, default=15 * 60, help="search time budget")
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; searches run single-threaded")
    p.add_argument("--extended", action="store_true", help="allow long-running targets")
    p.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte-identical output)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circle-ekr", description="Finite circle geometries and EKR searches.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("geometry").add_subparsers(dest="action", required=True)
    for name, fn in (("build", cmd_geometry_build), ("validate", cmd_geometry_validate)):
        p = g.add_parser(name)
        _common(p)
        p.set_defaults(func=fn)

    s = sub.add_parser("scheme").add_subparsers(dest="action", required=True)
    for name, fn in (("check", cmd_scheme_check), ("eigen", cmd_scheme_eigen), ("identities", cmd_scheme_identities)):
        p = s.add_parser(name)
        _common(p)
        p.set_defaults(func=fn)

    b = sub.add_parser("bound")
    b.add_argument("kind", choices=("hoffman", "lp", "clique-coclique"))
    b.add_argument("--family", choices=FAMILIES)
    b.add_argument("--q", type=int)
    b.add_argument("--model", default=None)
    b.add_argument("--weights", default="3:1", help="label:weight pairs, e.g. 1:3,3:1")
    b.add_argument("--allowed", default="0,2", help="relation labels allowed in the LP")
    b.add_argument("--n", type=int)
    b.add_argument("--clique", type=int)
    _common(b, geometry=False)
    b.set_defaults(func=cmd_bound)

    e = sub.add_parser("ekr").add_subparsers(dest="action", required=True)
    p = e.add_parser("search")
    _common(p)
    p.add_argument("--t", type=int, choices=(1, 2), default=1)
    p.set_defaults(func=cmd_ekr_search)
    p = e.add_parser("classify")
    _common(p)
    p.add_argument("--circles", required=True, help="comma-separated circle ids")
    p.set_defaults(func=cmd_ekr_classify)
    p = e.add_parser("enumerate-max")
    _common(p)
    p.add_argument("--size", type=int, default=None, help="family size (default: circles per point)")
    p.set_defaults(func=cmd_ekr_enumerate)

    pp = sub.add_parser("poly").add_subparsers(dest="action", required=True)
    p = pp.add_parser("max")
    _common(p, geometry=False)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.set_defaults(func=cmd_poly_max)
    p = pp.add_parser("ekr")
    _common(p, geometry=False)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.set_defaults(func=cmd_poly_ekr)
    p = pp.add_parser("table1")
    _common(p, geometry=False)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_poly_table1)

    t = sub.add_parser("tables").add_subparsers(dest="action", required=True)
    p = t.add_parser("reproduce")
    p.add_argument("table", choices=("table1", "table2", "table3"))
    p.add_argument("--max-q", type=int, default=None)
    _common(p, geometry=False)
    p.set_defaults(func=cmd_tables)
    return ap


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.command_line = " ".join(argv)
    try:
        if getattr(args, "q", None) is not None:
            prime_power(args.q)
        return args.func(args, Emitter(args))
    except (Usage, BadArguments, WrongParity, UnsupportedOrder, NotAPrimePower) as exc:
        sys.stderr.write(f"circle-ekr: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
