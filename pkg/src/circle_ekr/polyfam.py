"""Intersecting families of low-degree polynomials over GF(q) and related counts.

Polynomial ``c_0 + c_1 X + ... + c_k X^k`` has index ``sum(c_i * q**i)``.
Two polynomials are t-intersecting when they agree on at least t elements
of GF(q).  The counting helpers for degree <= 2 (``mi_counts``,
``rootless_count``) also evaluate at infinity, where h(inf) is the X^2
coefficient; infinity is encoded as ``q``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .errors import BadArguments
from .gf import NONSQUARE, SQUARE, Field
from .pg import _row_mask
from .search import FamilyWitness, SearchBudget, cliques_of_size, max_clique

SQUARE_CLASS, NONSQUARE_CLASS = "S", "nonS"


@dataclass(eq=False)
class PolySpace:
    field: Field
    k: int

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return self.q ** (self.k + 1)

    def coeffs(self, f: int) -> tuple[int, ...]:
        q = self.q
        return tuple((f // q**i) % q for i in range(self.k + 1))

    def index(self, coeffs) -> int:
        return sum(c * self.q**i for i, c in enumerate(coeffs))

    def evaluate(self, f: int, x: int) -> int:
        F, v = self.field, 0
        for c in reversed(self.coeffs(f)):
            v = F.add(F.mul(v, x), c)
        return v

    @cached_property
    def values(self) -> np.ndarray:
        """values[f, x] = f(x) for x in GF(q), built by vectorised Horner."""
        F, q = self.field, self.q
        add, mul = F.add_table, F.mul_table
        C = np.array([self.coeffs(f) for f in range(len(self))], dtype=np.int64)
        xs = np.arange(q)
        V = np.zeros((len(self), q), dtype=np.int64)
        for i in range(self.k, -1, -1):
            V = add[mul[V, xs[None, :]], C[:, i][:, None]]
        return V

    def agreement_matrix(self) -> np.ndarray:
        V = self.values
        out = np.zeros((len(self), len(self)), dtype=np.int64)
        for x in range(self.q):
            col = V[:, x]
            out += col[:, None] == col[None, :]
        return out

    def family(self, x: int, y: int) -> list[int]:
        """F_{x,y}: all polynomials with f(x) = y."""
        return [int(f) for f in np.flatnonzero(self.values[:, x] == y)]


def agreement(space: PolySpace, f: int, g: int) -> int:
    return int((space.values[f] == space.values[g]).sum())


def _graph(space: PolySpace, t: int, intersecting: bool) -> list[int]:
    A = space.agreement_matrix()
    X = A >= t if intersecting else A < t
    X[range(len(X)), range(len(X))] = False
    return [_row_mask(r) for r in X]


@dataclass
class PolyMaxResult:
    q: int
    k: int
    t: int
    clique: FamilyWitness
    coclique: FamilyWitness

    @property
    def bound(self) -> int:
        return self.q ** (self.k + 1 - self.t)

    @property
    def coclique_bound(self) -> int:
        return self.q**self.t

    @property
    def match(self) -> bool:
        return (self.clique.optimal and self.coclique.optimal
                and self.clique.size == self.bound and self.coclique.size == self.coclique_bound)


def max_t_intersecting_polys(space: PolySpace, t: int, budget: SearchBudget = SearchBudget()) -> PolyMaxResult:
    """Exact largest t-intersecting and largest non-t-intersecting families.

    Adding a fixed polynomial is an automorphism of both graphs, so each
    search is rooted at the zero polynomial.
    """
    if not 1 <= t <= space.k < space.q:
        raise BadArguments(f"need 1 <= t <= k < q, got t={t}, k={space.k}, q={space.q}")
    q = space.q
    # seeds: vanish at the first t field elements / degree below t
    zero_at = [f for f in range(len(space)) if all(space.values[f, x] == 0 for x in range(t))]
    low_degree = list(range(q**t))
    out = []
    for intersecting, seed in ((True, zero_at), (False, low_degree)):
        clique, optimal, nodes = max_clique(_graph(space, t, intersecting), budget, root=0, seed=seed)
        out.append(FamilyWitness(tuple(clique), optimal=optimal, nodes=nodes))
    return PolyMaxResult(q, space.k, t, *out)


def strong_ekr_polys(space: PolySpace, budget: SearchBudget = SearchBudget()) -> list[FamilyWitness]:
    """All intersecting families of size q^k, each labelled by its (x, y) if it is some F_{x,y}."""
    q = space.q
    if not 2 <= space.k < q:
        raise BadArguments(f"need 2 <= k < q, got k={space.k}, q={q}")
    fams = cliques_of_size(_graph(space, 1, True), q**space.k, budget)
    lookup = {tuple(space.family(x, y)): (x, y) for x in range(q) for y in range(q)}
    out = []
    for f in fams:
        xy = lookup.get(tuple(f))
        W = FamilyWitness(tuple(f), optimal=True)
        if xy is not None:
            W.label, W.anchor = "F", xy[0] * q + xy[1]
        out.append(W)
    return out


# -- counting helpers (degree <= 2, with the point at infinity) ----------------------


def _eval_inf(F: Field, h: tuple[int, int, int], x: int) -> int:
    a, b, c = h
    if x == F.q:
        return a
    return F.add(F.add(F.mul(a, F.mul(x, x)), F.mul(b, x)), c)


@lru_cache(maxsize=None)
def _quadratic_table(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Values on GF(q) + infinity and root counts of every (a, b, c), row a*q^2 + b*q + c."""
    from .gf import field_create

    F = field_create(q)
    hs = list(product(range(q), repeat=3))
    V = np.array([[_eval_inf(F, h, x) for x in range(q + 1)] for h in hs], dtype=np.int64)
    return V, (V == 0).sum(axis=1)


def _require_odd(F: Field) -> None:
    if F.p == 2:
        raise BadArguments(f"q must be odd, got {F.q}")


def mi_counts(F: Field, x1: int, y1: int, x2: int, y2: int) -> tuple[int, int, int]:
    """(m0, m1, m2): degree <= 2 polynomials through (x1,y1), (x2,y2) split by root count."""
    _require_odd(F)
    q = F.q
    if x1 == x2 or not (0 <= x1 <= q and 0 <= x2 <= q) or not (0 < y1 < q and 0 < y2 < q):
        raise BadArguments("need distinct x in GF(q) or infinity and nonzero y")
    V, roots = _quadratic_table(q)
    hit = (V[:, x1] == y1) & (V[:, x2] == y2)
    m = np.bincount(roots[hit], minlength=3)
    if len(m) > 3:
        raise AssertionError("a nonzero polynomial of degree <= 2 with more than 2 roots")
    return tuple(int(v) for v in m)


def table1_expected(q: int, cls: str) -> tuple[int, int, int]:
    if cls == SQUARE_CLASS:
        return ((q - 1) // 2, 2, (q - 3) // 2)
    return ((q + 1) // 2, 0, (q - 1) // 2)


def ratio_class(F: Field, y1: int, y2: int) -> str:
    return SQUARE_CLASS if F.char(F.div(y1, y2)) == SQUARE else NONSQUARE_CLASS


def rootless_count(F: Field, x: int, y: int) -> int:
    """Degree <= 2 polynomials with no root on GF(q) or infinity and h(x) = y."""
    _require_odd(F)
    if not 0 < y < F.q or not 0 <= x <= F.q:
        raise BadArguments("need x in GF(q) or infinity and nonzero y")
    V, roots = _quadratic_table(F.q)
    return int(((V[:, x] == y) & (roots == 0)).sum())


def square_separator(F: Field, a: int, b: int) -> int:
    """Smallest c with c-a and c-b nonzero and of different quadratic type."""
    _require_odd(F)
    if a == b:
        raise BadArguments("a and b must differ")
    for c in F.elements():
        u, v = F.sub(c, a), F.sub(c, b)
        if u and v and F.char(u) != F.char(v):
            assert {F.char(u), F.char(v)} == {SQUARE, NONSQUARE}
            return c
    raise AssertionError("no separating element")  # pragma: no cover


@dataclass
class Table1Row:
    q: int
    cls: str
    m: tuple[int, int, int]
    cases: int
    consistent: bool

    @property
    def match(self) -> bool:
        return self.consistent and self.m == table1_expected(self.q, self.cls)


def table1(F: Field) -> list[Table1Row]:
    """mi_counts over every valid (x1, y1, x2, y2), grouped by the class of y1/y2."""
    q = F.q
    seen: dict[str, set] = {SQUARE_CLASS: set(), NONSQUARE_CLASS: set()}
    cases = {SQUARE_CLASS: 0, NONSQUARE_CLASS: 0}
    for x1 in range(q + 1):
        for x2 in range(q + 1):
            if x1 == x2:
                continue
            for y1 in range(1, q):
                for y2 in range(1, q):
                    cls = ratio_class(F, y1, y2)
                    seen[cls].add(mi_counts(F, x1, y1, x2, y2))
                    cases[cls] += 1
    rows = []
    for cls in (SQUARE_CLASS, NONSQUARE_CLASS):
        vals = sorted(seen[cls])
        rows.append(Table1Row(q, cls, vals[0], cases[cls], len(vals) == 1))
    return rows


def table1_csv(rows: list[Table1Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "class", "m0", "m1", "m2"])
    for r in rows:
        w.writerow([r.q, r.cls, *r.m])
    return buf.getvalue()


def poly_csv(results: list[PolyMaxResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "k", "t", "max_size", "bound", "match"])
    for r in results:
        w.writerow([r.q, r.k, r.t, r.clique.size, r.bound, str(r.match).lower()])
    return buf.getvalue()
