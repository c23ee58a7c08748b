"""Points, lines and planes of PG(3,q).

Points and planes are both stored as normalized 4-vectors of field
indices (first nonzero coordinate equal to 1), enumerated in
lexicographic order.  Point ``i`` and plane ``i`` share a coordinate
vector; a point lies on a plane iff the dot product vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .errors import IdenticalPoints
from .gf import Field


@dataclass(frozen=True)
class PGPoint:
    index: int
    coords: tuple[int, int, int, int]


@dataclass(frozen=True)
class PGPlane:
    index: int
    coords: tuple[int, int, int, int]


@dataclass(frozen=True)
class PGLine:
    points: tuple[int, ...]

    @property
    def key(self) -> tuple[int, int]:
        return self.points[0], self.points[1]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, i) -> bool:
        return i in self.points


class Space:
    """PG(3,q) over a given field, with incidence helpers."""

    def __init__(self, field: Field):
        self.field = field
        q = field.q
        coords = [
            v for v in product(range(q), repeat=4)
            if any(v) and v[next(i for i, c in enumerate(v) if c)] == 1
        ]
        self.coords = np.array(coords, dtype=np.int64)
        self._index = {v: i for i, v in enumerate(coords)}
        assert len(coords) == q**3 + q**2 + q + 1

    @property
    def n(self) -> int:
        return len(self.coords)

    def point(self, i: int) -> PGPoint:
        return PGPoint(i, tuple(int(c) for c in self.coords[i]))

    def plane(self, i: int) -> PGPlane:
        return PGPlane(i, tuple(int(c) for c in self.coords[i]))

    def normalize(self, v) -> tuple[int, ...]:
        F = self.field
        v = [int(c) for c in v]
        lead = next((c for c in v if c), 0)
        if lead == 0:
            raise ValueError("zero vector has no projective point")
        inv = F.inv(lead)
        return tuple(F.mul(inv, c) for c in v)

    def index_of(self, v) -> int:
        return self._index[self.normalize(v)]

    def dot(self, u, v) -> int:
        F = self.field
        s = 0
        for a, b in zip(u, v):
            s = F.add(s, F.mul(int(a), int(b)))
        return s

    def evaluate(self, fn) -> np.ndarray:
        """Apply a vectorised polynomial ``fn(X0, X1, X2, X3)`` to every point."""
        c = self.coords
        return fn(c[:, 0], c[:, 1], c[:, 2], c[:, 3])

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean matrix ``inc[point, plane]``."""
        F = self.field
        add, mul = F.add_table, F.mul_table
        c = self.coords
        acc = np.zeros((self.n, self.n), dtype=np.int64)
        for k in range(4):
            acc = add[acc, mul[c[:, k][:, None], c[:, k][None, :]]]
        return acc == 0

    @cached_property
    def planes_of_point(self) -> list[int]:
        """Bitmask over planes for each point."""
        return [_row_mask(r) for r in self.incidence]

    @cached_property
    def points_of_plane(self) -> list[int]:
        """Bitmask over points for each plane."""
        return [_row_mask(r) for r in self.incidence.T]

    def line_mask(self, i: int, j: int) -> int:
        """Bitmask of the points on the line through points i != j."""
        pp, m = self.points_of_plane, -1
        common = self.planes_of_point[i] & self.planes_of_point[j]
        while common:
            low = common & -common
            m &= pp[low.bit_length() - 1]
            common ^= low
        return m

    def collinear(self, i: int, j: int, k: int) -> bool:
        pm = self.planes_of_point
        return (pm[i] & pm[j] & pm[k]).bit_count() > 1

    def plane_points(self, h: int) -> np.ndarray:
        return np.flatnonzero(self.incidence[:, h])

    def planes_through(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.incidence[i, :])

    def line_through(self, i: int, j: int) -> PGLine:
        if i == j:
            raise IdenticalPoints(f"point {i} given twice")
        m, pts = self.line_mask(i, j), []
        while m:
            low = m & -m
            pts.append(low.bit_length() - 1)
            m ^= low
        return PGLine(tuple(pts))

    def span_points(self, i: int, j: int) -> PGLine:
        """Line through i and j computed from coordinates (independent of incidence)."""
        if i == j:
            raise IdenticalPoints(f"point {i} given twice")
        F = self.field
        P, Q = self.coords[i], self.coords[j]
        pts = {i}
        for lam in range(F.q):
            v = [F.add(int(Q[k]), F.mul(lam, int(P[k]))) for k in range(4)]
            pts.add(self.index_of(v))
        return PGLine(tuple(sorted(pts)))

    def planes_through_line(self, line: PGLine) -> np.ndarray:
        a, b = line.key
        return np.flatnonzero(self.incidence[a] & self.incidence[b])

    def meet(self, line: PGLine, h: int) -> int | None:
        """Point where ``line`` meets plane ``h``, or None if it lies in it."""
        on = [p for p in line.points if self.incidence[p, h]]
        return on[0] if len(on) == 1 else None


def _row_mask(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row[::-1]).tobytes(), "big") >> ((-len(row)) % 8)


def enumerate_space(field: Field) -> tuple[list[PGPoint], list[PGPlane]]:
    S = Space(field)
    return [S.point(i) for i in range(S.n)], [S.plane(i) for i in range(S.n)]


def line_class(line: PGLine, S) -> int:
    """Number of points of ``line`` that lie in the index set ``S``."""
    S = S if isinstance(S, (set, frozenset)) else set(S)
    return sum(1 for p in line.points if p in S)
