"""Quadratic sets in PG(3,q): ovoids, oval cones and hyperbolic quadrics."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import ConstructionInvalid, NotAnOval, UnsupportedOrder
from .gf import Field, prime_power
from .pg import PGLine, Space

ELLIPTIC, SUZUKI_TITS, CONE, HYPERBOLIC = "elliptic", "suzuki_tits", "cone", "hyperbolic"

TANGENT_POINT, OVAL, LINES, OTHER = "tangent_point", "oval", "line_pair_or_lines", "other"


@lru_cache(maxsize=None)
def space_for(q: int) -> Space:
    from .gf import field_create

    return Space(field_create(q))


@dataclass(eq=False)
class QuadraticSet:
    kind: str
    space: Space
    points: frozenset[int]
    vertex: int | None = None
    base: tuple[int, ...] | None = None
    base_description: str = ""
    nucleus_line: PGLine | None = None
    rulings: tuple[tuple[PGLine, ...], tuple[PGLine, ...]] | None = None
    equation: str = ""
    _sections: dict = dc_field(default_factory=dict, repr=False)

    @property
    def q(self) -> int:
        return self.space.field.q

    @property
    def nonsingular(self) -> list[int]:
        return sorted(p for p in self.points if p != self.vertex)

    def section(self, h: int) -> list[int]:
        if h not in self._sections:
            on = self.space.incidence[:, h]
            self._sections[h] = sorted(p for p in self.points if on[p])
        return self._sections[h]

    def nucleus_of_plane(self, h: int) -> int | None:
        """For even-q cones: the point where plane ``h`` meets the nucleus line."""
        if self.nucleus_line is None:
            return None
        return self.space.meet(self.nucleus_line, h)


# -- generic checks ---------------------------------------------------------


def collinear_witness(space: Space, pts) -> tuple[int, int, int] | None:
    """Return three collinear points of ``pts`` if any exist.

    Three points are collinear iff more than one plane contains all of them.
    """
    pts = sorted(set(pts))
    pm = space.planes_of_point
    for i, a in enumerate(pts):
        for j in range(i + 1, len(pts)):
            b = pts[j]
            ab = pm[a] & pm[b]
            for c in pts[j + 1:]:
                if (ab & pm[c]).bit_count() > 1:
                    return (a, b, c)
    return None


def is_oval(space: Space, pts) -> bool:
    return len(pts) == space.field.q + 1 and collinear_witness(space, pts) is None


def lines_in_set_through(space: Space, p: int, S: frozenset[int]) -> list[PGLine]:
    """All lines through point ``p`` that are contained in ``S``."""
    covered, out = {p}, []
    for x in sorted(S):
        if x in covered:
            continue
        line = space.line_through(p, x)
        covered.update(line.points)
        if all(y in S for y in line.points):
            out.append(line)
    return out


def plane_lines_through(space: Space, p: int, h: int) -> list[PGLine]:
    """The q+1 lines through ``p`` inside plane ``h``."""
    covered, out = {p}, []
    for x in space.plane_points(h):
        x = int(x)
        if x not in covered:
            line = space.line_through(p, x)
            covered.update(line.points)
            out.append(line)
    return out


def nucleus(space: Space, oval: list[int], h: int) -> int:
    """Nucleus of an oval in plane ``h`` (even q): the common point of all tangents."""
    O = set(oval)
    common = None
    for p in oval:
        tangents = [l for l in plane_lines_through(space, p, h) if sum(x in O for x in l) == 1]
        if len(tangents) != 1:
            raise NotAnOval(f"point {p} lies on {len(tangents)} tangents")
        pts = set(tangents[0].points) - {p}
        common = pts if common is None else common & pts
    if common is None or len(common) != 1:
        raise NotAnOval("tangents are not concurrent")
    return common.pop()


def _plane_index(space: Space, coords) -> int:
    return space.index_of(coords)


def _zero_set(space: Space, fn) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(space.evaluate(fn) == 0))


# -- constructors -----------------------------------------------------------


def _ops(F: Field):
    add, mul = F.add_table, F.mul_table

    def A(*xs):
        out = xs[0]
        for x in xs[1:]:
            out = add[out, x]
        return out

    def M(*xs):
        out = xs[0]
        for x in xs[1:]:
            out = mul[out, x]
        return out

    return A, M


def elliptic_quadric(field: Field) -> QuadraticSet:
    """Zero set of g(X0,X1) + X2 X3 with g an irreducible binary quadratic form."""
    S = space_for(field.q)
    A, M = _ops(field)
    if field.p == 2:
        c = next(x for x in field.elements() if field.trace(x) == 1)
        g = lambda x0, x1: A(M(x0, x0), M(x0, x1), M(c, x1, x1))
        eq = f"X0^2 + X0*X1 + [{c}]*X1^2 + X2*X3 = 0"
    else:
        n = next(x for x in field.elements() if field.char(x) == "nonsquare")
        mn = field.neg(n)
        g = lambda x0, x1: A(M(x0, x0), M(mn, x1, x1))
        eq = f"X0^2 - [{n}]*X1^2 + X2*X3 = 0"
    pts = _zero_set(S, lambda x0, x1, x2, x3: A(g(x0, x1), M(x2, x3)))
    Q = QuadraticSet(ELLIPTIC, S, pts, equation=eq)
    _require_ovoid(Q)
    return Q


def _require_ovoid(Q: QuadraticSet) -> None:
    q = Q.q
    if len(Q.points) != q * q + 1:
        raise ConstructionInvalid(f"{Q.kind}: {len(Q.points)} points, expected {q*q+1}")
    w = collinear_witness(Q.space, Q.points)
    if w is not None:
        raise ConstructionInvalid(f"{Q.kind}: collinear triple {w}")


def suzuki_tits(field: Field) -> QuadraticSet:
    """Tits ovoid {(xy + x^(s+2) + y^s, 1, x, y)} + (1,0,0,0), s = 2^(e+1), q = 2^(2e+1)."""
    p, h = prime_power(field.q)
    if p != 2 or h < 3 or h % 2 == 0:
        raise UnsupportedOrder(f"Suzuki-Tits ovoids need q = 2^h with h > 1 odd, got q = {field.q}")
    S = space_for(field.q)
    F = field
    sigma = 2 ** ((h - 1) // 2 + 1)
    pts = {S.index_of((1, 0, 0, 0))}
    for x in F.elements():
        for y in F.elements():
            z = F.add(F.add(F.mul(x, y), F.pow(x, sigma + 2)), F.pow(y, sigma))
            pts.add(S.index_of((z, 1, x, y)))
    Q = QuadraticSet(SUZUKI_TITS, S, frozenset(pts), equation=f"sigma = {sigma}")
    _require_ovoid(Q)
    return Q


def quadric_rank(Q: QuadraticSet) -> int:
    """Rank over GF(q) of the 10 degree-2 monomials evaluated on the point set.

    Rank 10 means no nonzero quadratic form vanishes on the set, so the set is
    not contained in any quadric.  An elliptic quadric gives rank 9.
    """
    F = Q.space.field
    rows = []
    for p in sorted(Q.points):
        c = [int(v) for v in Q.space.coords[p]]
        rows.append([F.mul(c[i], c[j]) for i in range(4) for j in range(i, 4)])
    return gf_rank(F, rows)


def gf_rank(F: Field, rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = F.inv(rows[rank][col])
        rows[rank] = [F.mul(inv, v) for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def conic_base(field: Field) -> list[int]:
    """The conic X0 X2 = X1^2 in the plane X3 = 0."""
    S = space_for(field.q)
    F = field
    pts = {S.index_of((F.mul(s, s), s, 1, 0)) for s in F.elements()}
    pts.add(S.index_of((1, 0, 0, 0)))
    return sorted(pts)


def hyperoval_base(field: Field, drop: int | None = None) -> list[int]:
    """(conic + nucleus) minus one conic point, in the plane X3 = 0 (even q).

    ``drop`` defaults to the first conic point in canonical order.  The result
    is an oval whose nucleus is the dropped point.
    """
    if field.p != 2:
        raise UnsupportedOrder("hyperovals need even q")
    S = space_for(field.q)
    conic = conic_base(field)
    drop = conic[0] if drop is None else drop
    if drop not in conic:
        raise ValueError("dropped point must lie on the conic")
    return sorted((set(conic) | {S.index_of((0, 1, 0, 0))}) - {drop})


def oval_cone(field: Field, base_oval, description: str = "oval") -> QuadraticSet:
    """Cone with vertex (0,0,0,1) over an oval in the plane X3 = 0."""
    S = space_for(field.q)
    base = sorted(int(b) for b in base_oval)
    h = _plane_index(S, (0, 0, 0, 1))
    if any(not S.incidence[b, h] for b in base):
        raise NotAnOval("base points must lie in the plane X3 = 0")
    if not is_oval(S, base):
        raise NotAnOval(f"base of {len(base)} points is not an oval")
    R = S.index_of((0, 0, 0, 1))
    pts = {R}
    for b in base:
        pts.update(S.line_through(R, b).points)
    nu = None
    if field.p == 2:
        nu = S.line_through(nucleus(S, base, h), R)
    return QuadraticSet(CONE, S, frozenset(pts), vertex=R, base=tuple(base),
                        base_description=description, nucleus_line=nu)


def quadric_cone(field: Field) -> QuadraticSet:
    Q = oval_cone(field, conic_base(field), description="conic X0*X2 = X1^2")
    Q.equation = "X0*X2 = X1^2"
    return Q


def hyperbolic_quadric(field: Field) -> QuadraticSet:
    S = space_for(field.q)
    A, M = _ops(field)
    pts = _zero_set(S, lambda x0, x1, x2, x3: A(M(x0, x1), M(x2, x3)))
    first = min(pts)
    l1, l2 = lines_in_set_through(S, first, pts)
    ruling1 = {l1}
    ruling2 = {l2}
    for x in l2.points:
        ruling1.update(l for l in lines_in_set_through(S, x, pts) if l != l2)
    for x in l1.points:
        ruling2.update(l for l in lines_in_set_through(S, x, pts) if l != l1)
    r1 = tuple(sorted(ruling1, key=lambda l: l.points))
    r2 = tuple(sorted(ruling2, key=lambda l: l.points))
    if r2[0].points < r1[0].points:
        r1, r2 = r2, r1
    return QuadraticSet(HYPERBOLIC, S, pts, rulings=(r1, r2), equation="X0*X1 + X2*X3 = 0")


def plane_section(Q: QuadraticSet, h: int) -> tuple[str, list[int]]:
    """Classify the section of ``Q`` by plane ``h`` from its size and collinearity."""
    sec = Q.section(h)
    q = Q.q
    if len(sec) == 1:
        return TANGENT_POINT, sec
    if len(sec) == q + 1 and Q.vertex not in sec and collinear_witness(Q.space, sec) is None:
        return OVAL, sec
    if len(sec) >= q + 1:
        S = frozenset(sec)
        if any(lines_in_set_through(Q.space, p, S) for p in sec[:2]):
            return LINES, sec
    return OTHER, sec


def line_census(Q: QuadraticSet, lines) -> dict[int, int]:
    """Histogram of |line ∩ Q| over the given lines."""
    out: dict[int, int] = {}
    for l in lines:
        k = sum(1 for p in l.points if p in Q.points)
        out[k] = out.get(k, 0) + 1
    return out


def all_lines(space: Space):
    """Every line of PG(3,q), each exactly once (small q only)."""
    seen = set()
    for a in range(space.n):
        for b in range(a + 1, space.n):
            if (a, b) in seen:
                continue
            line = space.line_through(a, b)
            for x, y in combinations(line.points, 2):
                seen.add((x, y))
            yield line
