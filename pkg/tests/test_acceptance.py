"""Acceptance suite: one test per criterion; a PASS/FAIL line per criterion is printed at the end."""

import time
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from circle_ekr import geometry as geo
from circle_ekr import polyfam as pf
from circle_ekr import scheme as sc
from circle_ekr import search as se
from circle_ekr.cli import build_geometry, count_check
from circle_ekr.gf import field_create

crit = pytest.mark.criterion
BUDGET = se.SearchBudget(nodes=10**9, seconds=15 * 60)


@crit(1, "point/circle/parallel-class counts, q = 2..9")
def test_c01_counts():
    cases = [(geo.MOBIUS, q) for q in range(2, 10)] + [(geo.LAGUERRE, q) for q in range(2, 10)] + \
            [(geo.MINKOWSKI, q) for q in range(2, 10)] + [(geo.LAGUERRE_PLUS, q) for q in (2, 4, 8)]
    bad = []
    for family, q in cases:
        if q == 6:
            continue
        t = time.monotonic()
        c = count_check(build_geometry(family, q))
        if not c["ok"] or time.monotonic() - t >= 1:
            bad.append((family, q, c))
    assert not bad


@crit(2, "axiom validation of the listed planes, under 2 min in total")
def test_c02_axioms():
    cases = [(geo.MOBIUS, 4, "elliptic"), (geo.MOBIUS, 8, "elliptic"), (geo.MOBIUS, 8, "suzuki_tits")]
    cases += [(geo.LAGUERRE, q, m) for q in (2, 3, 4, 5, 7, 8) for m in ("cone", "poly")]
    cases += [(geo.LAGUERRE, 4, "hyperoval")]
    cases += [(geo.MINKOWSKI, q, "hyperbolic") for q in (3, 4, 5)]
    t = time.monotonic()
    failed = [(f, q, m) for f, q, m in cases if not geo.validate(build_geometry(f, q, m)).ok]
    assert not failed
    assert time.monotonic() - t < 120


@crit(3, "exhaustive scheme verification against closed forms; Minkowski q=5 not a scheme, 5 eigenvalues")
def test_c03_schemes():
    t = time.monotonic()
    for family, qs in [(geo.MOBIUS, (4, 8)), (geo.LAGUERRE, (3, 5, 7)), (geo.LAGUERRE_PLUS, (4, 8)),
                       (geo.MINKOWSKI, (4, 8))]:
        for q in qs:
            A = sc.analyze(build_geometry(family, q))
            assert A.report.is_scheme, (family, q)
            fam = sc.FAMILY_OF[family]
            assert sc.tensor_diff(A.report, fam, q) == [], (family, q)
            check = sc.verify_closed_forms(A.eigen, fam, q)
            assert check.ok, (family, q, check.diff)
    A = sc.analyze(build_geometry(geo.MINKOWSKI, 5))
    assert not A.report.is_scheme and A.report.witness
    assert sc.distinct_eigenvalue_count(A.relations.matrices[A.relations.index(3)]) == 5
    assert time.monotonic() - t < 300


@crit(4, "P Q = nI, A_i T_x = T_x B_i, spectral closure, Gram identities and ranks")
def test_c04_identities():
    t = time.monotonic()
    for family, q, rank in [(geo.MOBIUS, 4, 17), (geo.LAGUERRE, 3, 9), (geo.LAGUERRE, 5, 25),
                            (geo.LAGUERRE, 7, 49), (geo.LAGUERRE_PLUS, 4, 19), (geo.LAGUERRE_PLUS, 8, 71)]:
        G = build_geometry(family, q)
        A = sc.analyze(G)
        E = A.eigen
        assert sc.pq_identity(E)
        assert sc.intersection_matrix_check(A.relations, A.report, E)
        for i, lab in enumerate(E.labels):
            assert sc.spectral_closure(A.relations.matrices[i], E.column(lab))
        rep = sc.incidence_identities(G, A.relations)
        assert rep.ok, (family, q, rep.identities)
        assert rep.rank == rank == sc.expected_rank(family, q)
    assert time.monotonic() - t < 300


@crit(5, "Hoffman bounds q(q+1), q^2, q(q-1) and weighted Moebius q(q+1)/2+1")
def test_c05_hoffman():
    expect = {geo.MOBIUS: lambda q: q * (q + 1), geo.LAGUERRE: lambda q: q * q,
              geo.MINKOWSKI: lambda q: q * (q - 1)}
    for family, qs in [(geo.MOBIUS, (4, 8)), (geo.LAGUERRE, (3, 5)), (geo.MINKOWSKI, (4, 8))]:
        for q in qs:
            E = sc.analyze(build_geometry(family, q)).eigen
            t = time.monotonic()
            assert sc.hoffman_bound(E, {3: 1}) == expect[family](q)
            assert time.monotonic() - t < 1
    for q in (4, 8):
        E = sc.analyze(build_geometry(geo.MOBIUS, q)).eigen
        assert sc.hoffman_bound(E, {1: Fraction(q + 2, 2), 3: 1}) == Fraction(q * (q + 1), 2) + 1


@crit(6, "Delsarte LP with allowed {0,2} gives (q^2+1)/2 for odd Laguerre q = 5, 7")
def test_c06_lp():
    for q in (5, 7):
        E = sc.analyze(build_geometry(geo.LAGUERRE, q)).eigen
        t = time.monotonic()
        assert sc.delsarte_lp_bound(E, [0, 2]) == Fraction(q * q + 1, 2)
        assert time.monotonic() - t < 1


def _enumerate(family, q, model=None):
    G = build_geometry(family, q, model)
    t = time.monotonic()
    ws = se.enumerate_maximum_intersecting(G, se.circles_per_point(G), BUDGET)
    assert time.monotonic() - t < 15 * 60
    assert all(se.recheck_intersecting(G, w.circles) for w in ws)
    return G, ws


@crit(7, "complete enumeration of maximum intersecting families")
def test_c07_strong_ekr():
    for family, q, model, expect in [
        (geo.MOBIUS, 4, None, {se.PENCIL: 17}),
        (geo.LAGUERRE, 3, None, {se.PENCIL: 12}),
        (geo.LAGUERRE, 5, None, {se.PENCIL: 30}),
        (geo.LAGUERRE, 4, "cone", {se.NUCLEUS: 4, se.PENCIL: 20}),
        (geo.LAGUERRE, 4, "hyperoval", {se.NUCLEUS: 4, se.PENCIL: 20}),
        (geo.MINKOWSKI, 3, None, {se.PENCIL: 16}),
    ]:
        G, ws = _enumerate(family, q, model)
        assert se.label_counts(ws) == expect, (family, q, model)
        assert len({(w.label, w.anchor) for w in ws}) == len(ws)
    G, ws = _enumerate(geo.LAGUERRE, 2)
    assert len(ws) == 16 and {w.size for w in ws} == {4}


def _max2(family, q):
    G = build_geometry(family, q)
    W = se.max_t_intersecting(G, 2, BUDGET)
    assert W.optimal and se.recheck_intersecting(G, W.circles, 2)
    return W.size


@crit(8, "odd Laguerre 2-intersecting maxima 3->4, 5->7, 7->10, 9->13")
def test_c08_table2():
    assert {q: _max2(geo.LAGUERRE, q) for q in (3, 5, 7, 9)} == {3: 4, 5: 7, 7: 10, 9: 13}


@crit(9, "Minkowski 2-intersecting maxima q = 2..9, with the Minkowski and Laguerre upper bounds")
def test_c09_table3():
    sizes = {q: _max2(geo.MINKOWSKI, q) for q in (2, 3, 4, 5, 7, 8, 9)}
    assert sizes == {2: 1, 3: 2, 4: 4, 5: 5, 7: 8, 8: 10, 9: 12}
    # the Minkowski bound is stated for q >= 3; at q = 2 it evaluates to 0
    assert all(s <= (q + 1) * (q - 2) // 2 for q, s in sizes.items() if q >= 3)
    assert all(_max2(geo.LAGUERRE, q) < Fraction(q * q + 1, 2) for q in (3, 5, 7))


@crit(10, "even Laguerre 2-intersecting maximum is q at q = 4, 8")
def test_c10_laguerre_even():
    t = time.monotonic()
    assert _max2(geo.LAGUERRE, 4) == 4 and _max2(geo.LAGUERRE, 8) == 8
    assert time.monotonic() - t < 60


@crit(11, "Moebius 2-intersecting: exactly 8 at q=4; at most 9 at q=5 with a family of 8")
def test_c11_mobius_two_intersecting():
    # exact search returns 7 at q = 4 and 10 at q = 5; left failing on purpose
    q4 = _max2(geo.MOBIUS, 4)
    q5 = _max2(geo.MOBIUS, 5)
    assert q5 >= 3 * (5 - 1) // 2 + 2
    assert q4 == 8
    assert q5 <= 9


@crit(12, "polynomial EKR: q^k maxima, F_xy classification and the q^(k+1-t), q^t bounds")
def test_c12_polynomials():
    t = time.monotonic()
    for q in (3, 4):
        S = pf.PolySpace(field_create(q), 2)
        ws = pf.strong_ekr_polys(S, BUDGET)
        assert len(ws) == q * q and all(w.label == "F" for w in ws)
        assert sorted(w.anchor for w in ws) == list(range(q * q))
        assert all(w.size == q**2 for w in ws)
    for q, k, tt in [(3, 2, 1), (3, 2, 2), (4, 2, 1), (4, 3, 2)]:
        r = pf.max_t_intersecting_polys(pf.PolySpace(field_create(q), k), tt, BUDGET)
        assert r.match, (q, k, tt, r.clique.size, r.coclique.size)
    assert time.monotonic() - t < 15 * 60


@crit(13, "m_i counts for all point pairs and rootless_count = q(q-1)/2 for q = 5, 7")
def test_c13_table1():
    t = time.monotonic()
    for q in (5, 7):
        F = field_create(q)
        rows = pf.table1(F)
        assert all(r.match for r in rows)
        assert {r.cls: r.m for r in rows} == {"S": ((q - 1) // 2, 2, (q - 3) // 2),
                                              "nonS": ((q + 1) // 2, 0, (q - 1) // 2)}
        assert all(pf.rootless_count(F, x, y) == q * (q - 1) // 2 for x in range(q + 1) for y in range(1, q))
    assert time.monotonic() - t < 60


def _oracle_max(G, t):
    X = G.intersections >= t
    np.fill_diagonal(X, False)
    return max(len(c) for c in nx.find_cliques(nx.from_numpy_array(X.astype(int))))


@crit(14, "branch and bound equals an exhaustive oracle on every geometry with at most 40 circles")
def test_c14_oracle():
    start = time.monotonic()
    cases = [(geo.MOBIUS, 2, None), (geo.MOBIUS, 3, None),
             (geo.LAGUERRE, 2, "cone"), (geo.LAGUERRE, 2, "poly"), (geo.LAGUERRE, 3, "cone"),
             (geo.LAGUERRE, 3, "poly"), (geo.LAGUERRE_PLUS, 2, None),
             (geo.MINKOWSKI, 2, "hyperbolic"), (geo.MINKOWSKI, 2, "pgl"),
             (geo.MINKOWSKI, 3, "hyperbolic"), (geo.MINKOWSKI, 3, "pgl")]
    for family, q, model in cases:
        G = build_geometry(family, q, model)
        assert G.n_circles <= 40
        for t in (1, 2):
            W = se.max_t_intersecting(G, t, BUDGET)
            assert W.optimal and W.size == _oracle_max(G, t), (family, q, model, t)
    assert time.monotonic() - start < 300
