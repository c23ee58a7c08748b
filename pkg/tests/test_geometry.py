import json

import pytest

from circle_ekr import geometry as geo
from circle_ekr.errors import NotIsomorphicUnderCanonicalMap
from circle_ekr.gf import field_create
from conftest import geometry

CASES = [("mobius", q, None) for q in (2, 3, 4, 5)] + \
        [("laguerre", q, m) for q in (2, 3, 4, 5) for m in ("cone", "poly")] + \
        [("minkowski", q, m) for q in (2, 3, 4, 5) for m in ("hyperbolic", "pgl")]


@pytest.mark.parametrize("family,q,model", CASES)
def test_counts_and_axioms(family, q, model):
    G = geometry(family, q, model)
    e = geo.expected_counts(family, q)
    assert G.n_points == e["points"] and G.n_circles == e["circles"]
    assert len(G.parallel) == e["relations"]
    assert all(len(c) == q + 1 for c in G.circles)
    assert {m.bit_count() for m in G.point_circles} == {e["circles_per_point"]}
    for rel in G.parallel:
        assert len(rel) == e["classes_per_relation"]
        assert sorted(p for c in rel for p in c) == list(range(G.n_points))
    assert geo.validate(G).ok


@pytest.mark.parametrize("family,q", [("mobius", 3), ("laguerre", 3), ("minkowski", 3)])
def test_corrupted_geometry_gives_witness(family, q):
    G = geometry(family, q)
    circles = [list(c) for c in G.circles]
    # move one point of circle 0 to a point off it
    off = next(p for p in range(G.n_points) if p not in circles[0])
    circles[0][0] = off
    bad = geo.CircleGeometry(q=q, kind=G.kind, labels=G.labels,
                             circles=[tuple(sorted(c)) for c in circles], parallel=G.parallel)
    rep = geo.validate(bad)
    assert not rep.ok
    assert rep.witnesses
    assert json.dumps(rep.as_dict())


def test_json_round_trip():
    G = geometry("laguerre_plus", 4)
    doc = geo.to_json(G)
    H = geo.from_json(json.loads(json.dumps(doc)))
    assert H.circles == G.circles and H.parallel == G.parallel and H.nucleus_map == G.nucleus_map
    assert H.fingerprint() == G.fingerprint()


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_cone_isomorphic_to_polynomial_model(q):
    phi = geo.build_isomorphism(geometry("laguerre", q, "cone"), geometry("laguerre", q, "poly"))
    assert sorted(phi) == list(range(q * (q + 1)))


def test_isomorphism_rejects_other_cones():
    with pytest.raises(NotIsomorphicUnderCanonicalMap):
        geo.build_isomorphism(geometry("laguerre", 4, "hyperoval"), geometry("laguerre", 4, "poly"))


@pytest.mark.parametrize("q", [2, 4, 8])
def test_laguerre_plus(q):
    G = geometry("laguerre_plus", q)
    assert G.n_points == q * (q + 1) + q
    assert G.n_circles == q**3
    assert all(len(c) == q + 2 for c in G.circles)
    X = G.intersections
    off = {int(v) for i, row in enumerate(X) for j, v in enumerate(row) if i != j}
    assert off <= {0, 2}


def test_residue_is_affine_plane():
    G = geometry("mobius", 4)
    pts, lines = geo.residue(G, 0)
    assert geo.is_affine_plane(pts, lines, 4) is None
    assert geo.is_affine_plane(pts, lines[:-1], 4) is not None


@pytest.mark.parametrize("q", [3, 4, 5])
def test_pgl_maps_are_the_group(q):
    F = field_create(q)
    maps = list(geo.pgl2_maps(F))
    assert len(maps) == (q - 1) * q * (q + 1)
    for m in maps[:20]:
        img = [geo.mobius_action(F, m, x) for x in range(q + 1)]
        assert sorted(img) == list(range(q + 1))


def test_suzuki_tits_validates():
    G = geometry("mobius", 8, "suzuki_tits")
    assert G.n_circles == 8 * 65
    assert geo.validate(G).ok
