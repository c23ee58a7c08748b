import itertools

import pytest
from hypothesis import given, settings, strategies as st

from circle_ekr import polyfam as pf
from circle_ekr.errors import BadArguments
from circle_ekr.gf import field_create


@pytest.mark.parametrize("q,k", [(3, 2), (4, 2), (5, 1)])
def test_values_match_pointwise_evaluation(q, k):
    S = pf.PolySpace(field_create(q), k)
    for f in range(0, len(S), 7):
        assert [S.evaluate(f, x) for x in range(q)] == S.values[f].tolist()
        assert S.index(S.coeffs(f)) == f


def test_agreement_matrix():
    S = pf.PolySpace(field_create(3), 2)
    A = S.agreement_matrix()
    for f, g in itertools.combinations(range(len(S)), 2):
        if f % 5 == 0:
            assert A[f, g] == pf.agreement(S, f, g)
            # distinct degree <= 2 polynomials agree on at most 2 points
            assert A[f, g] <= 2


def test_families_fxy_are_intersecting():
    S = pf.PolySpace(field_create(4), 2)
    fam = S.family(1, 3)
    assert len(fam) == 16
    assert all(S.values[f, 1] == 3 for f in fam)


def test_poly_bounds_small():
    S = pf.PolySpace(field_create(3), 2)
    r = pf.max_t_intersecting_polys(S, 2)
    assert r.match and r.clique.size == 3 and r.coclique.size == 9


def test_poly_4_3_1():
    r = pf.max_t_intersecting_polys(pf.PolySpace(field_create(4), 3), 1)
    assert r.match and r.clique.size == 64 and r.coclique.size == 4


def test_bad_parameters():
    S = pf.PolySpace(field_create(3), 2)
    with pytest.raises(BadArguments):
        pf.max_t_intersecting_polys(S, 3)
    with pytest.raises(BadArguments):
        pf.mi_counts(field_create(4), 0, 1, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.data())
def test_mi_counts_sum_and_class(q, data):
    F = field_create(q)
    x1, x2 = data.draw(st.lists(st.integers(0, q), min_size=2, max_size=2, unique=True))
    y1, y2 = data.draw(st.integers(1, q - 1)), data.draw(st.integers(1, q - 1))
    m = pf.mi_counts(F, x1, y1, x2, y2)
    # q polynomials of degree <= 2 (with infinity) through two given points
    assert sum(m) == q
    assert m == pf.table1_expected(q, pf.ratio_class(F, y1, y2))


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_square_separator(q):
    F = field_create(q)
    for a, b in [(0, 1), (1, 2), (0, q - 1)]:
        c = pf.square_separator(F, a, b)
        assert F.char(F.sub(c, a)) != F.char(F.sub(c, b))


def test_csv_writers():
    rows = pf.table1(field_create(5))
    assert pf.table1_csv(rows) == "q,class,m0,m1,m2\n5,S,2,2,1\n5,nonS,3,0,2\n"
