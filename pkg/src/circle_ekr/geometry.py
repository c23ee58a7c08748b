"""Circle geometries (Möbius, Laguerre, Minkowski planes) and their validation.

A geometry is a list of point labels, a list of circles (sorted tuples of
point ids) and zero, one or two parallel relations.  Circles are also kept
as integer bitmasks over the points so intersection sizes are popcounts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import NotIsomorphicUnderCanonicalMap, WrongParity
from .gf import Field
from .quadset import CONE, ELLIPTIC, HYPERBOLIC, OVAL, SUZUKI_TITS, QuadraticSet, plane_section

MOBIUS, LAGUERRE, MINKOWSKI, LAGUERRE_PLUS = "mobius", "laguerre", "minkowski", "laguerre_plus"

_KIND_OF = {ELLIPTIC: MOBIUS, SUZUKI_TITS: MOBIUS, CONE: LAGUERRE, HYPERBOLIC: MINKOWSKI}

INF = "inf"


def bits(mask: int):
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(ids) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


@dataclass(eq=False)
class CircleGeometry:
    q: int
    kind: str
    labels: list[str]
    circles: list[tuple[int, ...]]
    parallel: list[list[list[int]]] = dc_field(default_factory=list)
    nucleus_map: list[int] | None = None
    nucleus_labels: list[str] | None = None
    model: str = ""
    vertex_transitive: bool = False
    source: QuadraticSet | None = dc_field(default=None, repr=False)
    pg_points: list[int] | None = dc_field(default=None, repr=False)
    circle_planes: list[int] | None = dc_field(default=None, repr=False)

    @property
    def n_points(self) -> int:
        return len(self.labels)

    @property
    def n_circles(self) -> int:
        return len(self.circles)

    @cached_property
    def circle_masks(self) -> list[int]:
        return [to_mask(c) for c in self.circles]

    @cached_property
    def point_circles(self) -> list[int]:
        """For each point, the bitmask of circles through it."""
        out = [0] * self.n_points
        for i, c in enumerate(self.circles):
            for p in c:
                out[p] |= 1 << i
        return out

    @cached_property
    def incidence(self) -> np.ndarray:
        """0/1 matrix W with rows indexed by circles and columns by points."""
        W = np.zeros((self.n_circles, self.n_points), dtype=np.int64)
        for i, c in enumerate(self.circles):
            W[i, list(c)] = 1
        return W

    @cached_property
    def intersections(self) -> np.ndarray:
        """Matrix of pairwise intersection sizes W W^t."""
        W = self.incidence
        return W @ W.T

    @cached_property
    def class_masks(self) -> list[list[int]]:
        return [[to_mask(c) for c in rel] for rel in self.parallel]

    @cached_property
    def parallel_mask(self) -> list[int]:
        """For each point, the mask of points parallel to it (itself included)."""
        out = [1 << p for p in range(self.n_points)]
        for rel in self.class_masks:
            for m in rel:
                for p in bits(m):
                    out[p] |= m
        return out

    def circles_through(self, *pts) -> list[int]:
        m = (1 << self.n_circles) - 1
        for p in pts:
            m &= self.point_circles[p]
        return list(bits(m))

    def pencil(self, p: int) -> list[int]:
        return self.circles_through(p)

    def fingerprint(self) -> str:
        return hashlib.sha256(json.dumps(to_json(self), sort_keys=False).encode()).hexdigest()[:16]


def to_json(G: CircleGeometry) -> dict:
    doc = {
        "order": G.q,
        "kind": G.kind,
        "points": [{"id": i, "label": lab} for i, lab in enumerate(G.labels)],
        "circles": [sorted(c) for c in G.circles],
        "parallel": [[sorted(c) for c in rel] for rel in G.parallel],
    }
    if G.nucleus_map is not None:
        doc["nucleus_map"] = list(G.nucleus_map)
    return doc


def from_json(doc: dict) -> CircleGeometry:
    labels = [p["label"] for p in sorted(doc["points"], key=lambda p: p["id"])]
    return CircleGeometry(
        q=doc["order"], kind=doc["kind"], labels=labels,
        circles=[tuple(c) for c in doc["circles"]],
        parallel=[[list(c) for c in rel] for rel in doc["parallel"]],
        nucleus_map=doc.get("nucleus_map"),
    )


# -- constructions -----------------------------------------------------------


def _coord_label(space, p: int) -> str:
    return "(" + ",".join(str(int(c)) for c in space.coords[p]) + ")"


def from_quadratic_set(Q: QuadraticSet) -> CircleGeometry:
    """Points: nonsingular points of Q.  Circles: sections by oval planes."""
    S = Q.space
    pts = Q.nonsingular
    pid = {p: i for i, p in enumerate(pts)}
    circles, planes = [], []
    for h in range(S.n):
        if Q.vertex is not None and S.incidence[Q.vertex, h]:
            continue
        label, sec = plane_section(Q, h)
        if label == OVAL:
            circles.append(tuple(sorted(pid[p] for p in sec)))
            planes.append(h)
    kind = _KIND_OF[Q.kind]
    parallel: list[list[list[int]]] = []
    nucleus_map = nucleus_labels = None
    if Q.kind == CONE:
        classes = [sorted(pid[p] for p in S.line_through(Q.vertex, b).points if p != Q.vertex)
                   for b in Q.base]
        parallel = [sorted(classes)]
        if Q.nucleus_line is not None:
            nu = [p for p in Q.nucleus_line.points if p != Q.vertex]
            nid = {p: i for i, p in enumerate(nu)}
            nucleus_map = [nid[Q.nucleus_of_plane(h)] for h in planes]
            nucleus_labels = [_coord_label(S, p) for p in nu]
    elif Q.kind == HYPERBOLIC:
        parallel = [sorted(sorted(pid[p] for p in l.points) for l in ruling) for ruling in Q.rulings]
    transitive = Q.kind in (ELLIPTIC, HYPERBOLIC) or (Q.kind == CONE and Q.base_description.startswith("conic"))
    return CircleGeometry(
        q=Q.q, kind=kind, labels=[_coord_label(S, p) for p in pts], circles=circles,
        parallel=parallel, nucleus_map=nucleus_map, nucleus_labels=nucleus_labels,
        model=f"{Q.kind}:{Q.base_description or Q.equation}", vertex_transitive=transitive,
        source=Q, pg_points=pts, circle_planes=planes,
    )


def _x_label(x: int, q: int) -> str:
    return INF if x == q else str(x)


def laguerre_polynomial_model(field: Field) -> CircleGeometry:
    """Graphs of aX^2+bX+c over F_q ∪ {∞}, with f(∞) = a.

    Point (x, y) has id ``x*q + y`` where x = q stands for ∞.
    """
    F, q = field, field.q
    labels = [f"({_x_label(x, q)},{y})" for x in range(q + 1) for y in range(q)]
    circles = []
    for a in range(q):
        for b in range(q):
            for c in range(q):
                vals = [F.add(F.add(F.mul(a, F.mul(x, x)), F.mul(b, x)), c) for x in range(q)]
                circles.append(tuple(x * q + y for x, y in enumerate(vals + [a])))
    parallel = [[[x * q + y for y in range(q)] for x in range(q + 1)]]
    nucleus_map = None
    if F.p == 2:
        # circle (a,b,c) is the plane X3 = aX0 + bX1 + cX2 whose nucleus is (0,1,0,b)
        nucleus_map = [b for a in range(q) for b in range(q) for c in range(q)]
    return CircleGeometry(
        q=q, kind=LAGUERRE, labels=labels, circles=[tuple(sorted(c)) for c in circles],
        parallel=parallel, nucleus_map=nucleus_map,
        nucleus_labels=[f"b={b}" for b in range(q)] if nucleus_map else None,
        model="polynomial", vertex_transitive=True,
    )


def pgl2_maps(field: Field):
    """Normalized matrices (a,b,c,d) of PGL(2,q), first nonzero entry 1."""
    F = field
    for m in ((a, b, c, d) for a in range(2) for b in range(F.q) for c in range(F.q) for d in range(F.q)):
        a, b, c, d = m
        lead = next((v for v in m if v), 0)
        if lead != 1:
            continue
        if F.sub(F.mul(a, d), F.mul(b, c)) != 0:
            yield m


def mobius_action(field: Field, m, x: int) -> int:
    """Apply x -> (ax+b)/(cx+d) on F_q ∪ {∞}, with ∞ encoded as q."""
    F, q = field, field.q
    a, b, c, d = m
    if x == q:
        num, den = a, c
    else:
        num, den = F.add(F.mul(a, x), b), F.add(F.mul(c, x), d)
    return q if den == 0 else F.div(num, den)


def minkowski_pgl_model(field: Field) -> CircleGeometry:
    """Graphs of fractional linear maps on PG(1,q).  Point (x, y) has id x*(q+1)+y."""
    q = field.q
    r = q + 1
    labels = [f"({_x_label(x, q)},{_x_label(y, q)})" for x in range(r) for y in range(r)]
    circles = []
    for m in pgl2_maps(field):
        circles.append(tuple(sorted(x * r + mobius_action(field, m, x) for x in range(r))))
    parallel = [
        [[x * r + y for y in range(r)] for x in range(r)],
        [[x * r + y for x in range(r)] for y in range(r)],
    ]
    return CircleGeometry(q=q, kind=MINKOWSKI, labels=labels, circles=circles,
                          parallel=parallel, model="pgl2", vertex_transitive=True)


def laguerre_plus(G: CircleGeometry) -> CircleGeometry:
    """Extend an even-order cone Laguerre plane by the nucleus line minus the vertex."""
    if G.q % 2:
        raise WrongParity(f"L+ needs even q, got q = {G.q}")
    if G.kind != LAGUERRE or G.source is None or G.source.nucleus_line is None:
        raise ValueError("laguerre_plus needs a Laguerre plane built from an even-order cone")
    Q = G.source
    nu = [p for p in Q.nucleus_line.points if p != Q.vertex]
    base = G.n_points
    circles = [tuple(sorted(c + (base + G.nucleus_map[i],))) for i, c in enumerate(G.circles)]
    parallel = [list(G.parallel[0]) + [[base + i for i in range(len(nu))]]]
    return CircleGeometry(
        q=G.q, kind=LAGUERRE_PLUS, labels=G.labels + [_coord_label(Q.space, p) for p in nu],
        circles=circles, parallel=parallel,
        nucleus_map=[base + k for k in G.nucleus_map], nucleus_labels=G.nucleus_labels,
        model=G.model + "+nu", vertex_transitive=G.vertex_transitive,
        source=Q, pg_points=G.pg_points + nu, circle_planes=G.circle_planes,
    )


def build_isomorphism(cone_model: CircleGeometry, poly_model: CircleGeometry) -> list[int]:
    """Map (s^2,s,1,a) -> (s,a) and (1,0,0,a) -> (∞,a); verify circles go to circles.

    Returns ``phi`` with ``phi[cone point id] = polynomial point id``.
    """
    Q = cone_model.source
    if Q is None or cone_model.q != poly_model.q or Q.equation != "X0*X2 = X1^2":
        raise NotIsomorphicUnderCanonicalMap("cone model must come from the quadric cone X0*X2 = X1^2")
    F, q = Q.space.field, cone_model.q
    phi = []
    for p in cone_model.pg_points:
        x0, x1, x2, x3 = (int(c) for c in Q.space.coords[p])
        if x2:
            s, a = F.div(x1, x2), F.div(x3, x2)
        else:
            s, a = q, F.div(x3, x0)
        phi.append(s * q + a)
    if sorted(phi) != list(range(poly_model.n_points)):
        raise NotIsomorphicUnderCanonicalMap("point map is not a bijection")
    mapped = {tuple(sorted(phi[p] for p in c)) for c in cone_model.circles}
    if mapped != set(poly_model.circles) or len(mapped) != cone_model.n_circles:
        raise NotIsomorphicUnderCanonicalMap("circles are not carried onto circles")
    return phi


# -- axiom validation ------------------------------------------------------


@dataclass
class AxiomReport:
    three_point: bool
    tangency: bool
    parallel_transversal: bool
    residues_affine: bool
    witnesses: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.three_point and self.tangency and self.parallel_transversal and self.residues_affine

    def as_dict(self) -> dict:
        return {
            "three_point": self.three_point,
            "tangency": self.tangency,
            "parallel_transversal": self.parallel_transversal,
            "residues_affine": self.residues_affine,
            "witnesses": {k: list(v) if isinstance(v, tuple) else v for k, v in self.witnesses.items()},
        }


def _check_three_point(G: CircleGeometry):
    par = G.parallel_mask
    pc = G.point_circles
    for a in range(G.n_points):
        for b in range(a + 1, G.n_points):
            if par[a] >> b & 1:
                continue
            ab = pc[a] & pc[b]
            blocked = par[a] | par[b]
            for c in range(b + 1, G.n_points):
                if blocked >> c & 1:
                    continue
                if (ab & pc[c]).bit_count() != 1:
                    return (a, b, c)
    return None


def _check_tangency(G: CircleGeometry):
    par, pc, cm = G.parallel_mask, G.point_circles, G.circle_masks
    for p in range(G.n_points):
        through_p = list(bits(pc[p]))
        pbit = 1 << p
        for x in range(G.n_points):
            if par[p] >> x & 1:
                continue
            both = [cm[d] for d in bits(pc[p] & pc[x])]
            for c in through_p:
                if cm[c] >> x & 1:
                    continue
                hits = sum(1 for d in both if d & cm[c] == pbit)
                if hits != 1:
                    return (p, x, c)
    return None


def _check_transversal(G: CircleGeometry):
    for r, rel in enumerate(G.class_masks):
        for k, cls in enumerate(rel):
            for i, c in enumerate(G.circle_masks):
                if (c & cls).bit_count() != 1:
                    return (i, r, k)
    return None


def residue(G: CircleGeometry, p: int) -> tuple[int, list[int]]:
    """Point mask and line masks of the derived structure at ``p``."""
    pts = ((1 << G.n_points) - 1) & ~G.parallel_mask[p]
    lines = [G.circle_masks[c] & pts for c in bits(G.point_circles[p])]
    for rel in G.class_masks:
        lines.extend(cls & pts for cls in rel if not cls >> p & 1)
    return pts, lines


def is_affine_plane(pts: int, lines: list[int], q: int):
    """Return None if (pts, lines) is an affine plane of order q, else a witness."""
    if pts.bit_count() != q * q:
        return ("points", pts.bit_count())
    if len(lines) != q * q + q:
        return ("lines", len(lines))
    for i, l in enumerate(lines):
        if l & ~pts or l.bit_count() != q:
            return ("line_size", i)
    on = {x: [] for x in bits(pts)}
    for i, l in enumerate(lines):
        for x in bits(l):
            on[x].append(i)
    for x, ls in on.items():
        # lines through x cover every other point exactly once
        union, total = 0, 0
        for i in ls:
            union |= lines[i]
            total += q - 1
        if union != pts or total != q * q - 1:
            return ("pair", x)
    for i, l in enumerate(lines):
        for x in bits(pts & ~l):
            if sum(1 for j in on[x] if not lines[j] & l) != 1:
                return ("parallel", i, x)
    return None


def _check_residues(G: CircleGeometry):
    for p in range(G.n_points):
        pts, lines = residue(G, p)
        w = is_affine_plane(pts, lines, G.q)
        if w is not None:
            return (p,) + tuple(w)
    return None


def validate(G: CircleGeometry) -> AxiomReport:
    """Check the characteristic circle-geometry axioms; failures carry witnesses."""
    w = {
        "three_point": _check_three_point(G),
        "tangency": _check_tangency(G),
        "parallel_transversal": _check_transversal(G),
        "residues_affine": _check_residues(G),
    }
    return AxiomReport(**{k: v is None for k, v in w.items()},
                       witnesses={k: v for k, v in w.items() if v is not None})


def expected_counts(kind: str, q: int) -> dict[str, int]:
    """Point, circle and parallel-class counts of a circle geometry of order q."""
    r = {MOBIUS: 0, LAGUERRE: 1, MINKOWSKI: 2}[kind]
    points = {MOBIUS: q * q + 1, LAGUERRE: q * (q + 1), MINKOWSKI: (q + 1) ** 2}[kind]
    circles = {MOBIUS: q * (q * q + 1), LAGUERRE: q**3, MINKOWSKI: (q - 1) * q * (q + 1)}[kind]
    return {
        "points": points, "circles": circles, "relations": r,
        "classes_per_relation": 0 if r == 0 else points // (q + r - 1),
        "circles_per_point": q * (q + 1 - r), "class_size": q + r - 1,
    }
