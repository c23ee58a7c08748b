import pytest

from circle_ekr.errors import NotAnOval, UnsupportedOrder
from circle_ekr.gf import field_create
from circle_ekr.quadset import (
    LINES, OVAL, TANGENT_POINT, all_lines, collinear_witness, conic_base, elliptic_quadric,
    hyperbolic_quadric, hyperoval_base, is_oval, line_census, nucleus, oval_cone, plane_section,
    quadric_cone, quadric_rank, space_for, suzuki_tits,
)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_elliptic_quadric_is_ovoid(q):
    Q = elliptic_quadric(field_create(q))
    assert len(Q.points) == q * q + 1
    census = line_census(Q, all_lines(Q.space))
    assert set(census) == {0, 1, 2}
    assert census[2] == (q * q + 1) * q * q // 2
    assert quadric_rank(Q) == min(9, q * q + 1)


@pytest.mark.parametrize("q", [3, 4])
def test_elliptic_plane_sections(q):
    Q = elliptic_quadric(field_create(q))
    kinds = [plane_section(Q, h)[0] for h in range(Q.space.n)]
    assert kinds.count(TANGENT_POINT) == q * q + 1
    assert kinds.count(OVAL) == q * (q * q + 1)


def test_suzuki_tits_q8_not_a_quadric():
    Q = suzuki_tits(field_create(8))
    assert len(Q.points) == 65
    assert collinear_witness(Q.space, Q.points) is None
    assert quadric_rank(Q) == 10


@pytest.mark.parametrize("q", [2, 4, 9, 16])
def test_suzuki_tits_orders(q):
    with pytest.raises(UnsupportedOrder):
        suzuki_tits(field_create(q))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_hyperbolic_quadric(q):
    Q = hyperbolic_quadric(field_create(q))
    assert len(Q.points) == (q + 1) ** 2
    r1, r2 = Q.rulings
    assert len(r1) == len(r2) == q + 1
    for rul in (r1, r2):
        pts = [p for l in rul for p in l]
        assert sorted(pts) == sorted(Q.points)
    assert all(len(set(a.points) & set(b.points)) == 1 for a in r1 for b in r2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_quadric_cone(q):
    Q = quadric_cone(field_create(q))
    assert len(Q.points) == q * q + q + 1
    assert Q.vertex in Q.points
    kinds = [plane_section(Q, h)[0] for h in range(Q.space.n)]
    assert kinds.count(OVAL) == q**3
    assert (Q.nucleus_line is not None) == (q % 2 == 0)


@pytest.mark.parametrize("q", [2, 4, 8])
def test_conic_nucleus(q):
    F = field_create(q)
    S = space_for(q)
    h = S.index_of((0, 0, 0, 1))
    assert nucleus(S, conic_base(F), h) == S.index_of((0, 1, 0, 0))


def test_hyperoval_base_is_oval_with_dropped_nucleus():
    F = field_create(8)
    S = space_for(8)
    base = hyperoval_base(F)
    assert is_oval(S, base)
    h = S.index_of((0, 0, 0, 1))
    assert nucleus(S, base, h) == conic_base(F)[0]
    Q = oval_cone(F, base, "hyperoval minus a point")
    assert len(Q.points) == 8 * 8 + 8 + 1


def test_oval_cone_rejects_non_oval():
    F = field_create(3)
    S = space_for(3)
    bad = [S.index_of(v) for v in [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0)]]
    with pytest.raises(NotAnOval):
        oval_cone(F, bad)


def test_cone_sections_contain_lines():
    Q = quadric_cone(field_create(3))
    h = next(h for h in range(Q.space.n) if Q.space.incidence[Q.vertex, h])
    kind, sec = plane_section(Q, h)
    assert kind in (LINES, TANGENT_POINT) or len(sec) == 1
