"""Relations on circles, association-scheme verification and exact spectra.

Relation labels follow intersection sizes: label 0 is equality, labels 1
and 2 mean the circles share one or two points, label 3 means disjoint.
Relations are stored in a fixed index order ``0..d``; ``labels[i]`` gives
the label of index ``i`` (for the extended even Laguerre plane only
labels 0, 2, 3 occur).

All spectral work is exact.  Matrix products use float64 only when the
entries are provably below 2**53, and fall back to integers otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np
from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import NonIntegerEigenvalue, NotAScheme, UnexpectedIntersectionSize
from .geometry import LAGUERRE, LAGUERRE_PLUS, MINKOWSKI, MOBIUS, CircleGeometry

_FLOAT_EXACT = 1 << 53
_INT_EXACT = 1 << 62


# -- exact arithmetic helpers ------------------------------------------------


def _q(x) -> Fraction:
    """sympy QQ/ZZ element (or int/Fraction) to Fraction."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


def _dm(rows, domain=QQ) -> DomainMatrix:
    rows = [[domain(int(v)) if domain is ZZ else domain(_q(v).numerator, _q(v).denominator)
             for v in r] for r in rows]
    return DomainMatrix(rows, (len(rows), len(rows[0]) if rows else 0), domain)


def _to_fractions(M: DomainMatrix) -> list[list[Fraction]]:
    return [[_q(v) for v in row] for row in M.to_Matrix().tolist()]


def exact_rank(M) -> int:
    """Rank over the rationals of an integer matrix."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return _dm(M.tolist(), ZZ).rank()


def exact_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact product of two integer matrices.

    The entry bound max|A| row sum times max|B| picks float64 BLAS,
    int64 or Python integers.
    """
    bound = int(np.abs(A).sum(axis=1).max(initial=0)) * int(np.abs(B).max(initial=0))
    if bound < _FLOAT_EXACT:
        return np.rint(A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64)
    if bound < _INT_EXACT and A.dtype != object and B.dtype != object:
        return A.astype(np.int64) @ B.astype(np.int64)
    return A.astype(object) @ B.astype(object)


# -- relations ------------------------------------------------------------------


@dataclass(eq=False)
class RelationSet:
    """Relation index matrix and the 0/1 adjacency matrices A_0..A_d."""

    labels: tuple[int, ...]
    relation: np.ndarray  # relation[x, y] = index of the relation containing (x, y)
    geometry_kind: str = ""
    q: int = 0

    @property
    def d(self) -> int:
        return len(self.labels) - 1

    @property
    def n(self) -> int:
        return self.relation.shape[0]

    @cached_property
    def matrices(self) -> list[np.ndarray]:
        return [(self.relation == i).astype(np.int64) for i in range(len(self.labels))]

    @cached_property
    def valencies(self) -> tuple[int, ...]:
        return tuple(int(c) for c in np.bincount(self.relation[0], minlength=len(self.labels)))

    def index(self, label: int) -> int:
        return self.labels.index(label)

    def bit_rows(self, i: int) -> list[int]:
        """Packed adjacency rows of relation index ``i``."""
        from .pg import _row_mask

        return [_row_mask(r) for r in self.relation == i]


def relations(G: CircleGeometry) -> RelationSet:
    """Classify each pair of circles by the size of its intersection."""
    X = G.intersections
    size = len(G.circles[0])
    labels = (0, 2, 3) if G.kind == LAGUERRE_PLUS else (0, 1, 2, 3)
    by_size = {size: 0, 0: labels.index(3), 2: labels.index(2)}
    if 1 in labels:
        by_size[1] = labels.index(1)
    rel = np.full(X.shape, -1, dtype=np.int64)
    for s, idx in by_size.items():
        rel[X == s] = idx
    bad = np.argwhere(rel < 0)
    if len(bad):
        x, y = (int(v) for v in bad[0])
        raise UnexpectedIntersectionSize(f"circles {x} and {y} share {int(X[x, y])} points")
    if not (np.diagonal(rel) == 0).all() or (rel[~np.eye(len(rel), dtype=bool)] == 0).any():
        raise UnexpectedIntersectionSize("repeated circle")
    return RelationSet(labels=labels, relation=rel, geometry_kind=G.kind, q=G.q)


# -- scheme verification ----------------------------------------------------------


@dataclass
class SchemeReport:
    is_scheme: bool
    valencies: tuple[int, ...]
    labels: tuple[int, ...]
    p: list[list[list[int]]] | None = None  # p[k][i][j]
    witness: dict | None = None

    def intersection_matrix(self, i: int) -> list[list[int]]:
        """B_i with entry (k, j) equal to p^k_{ij}."""
        d = len(self.labels)
        return [[self.p[k][i][j] for j in range(d)] for k in range(d)]

    def as_dict(self) -> dict:
        return {
            "is_scheme": self.is_scheme,
            "labels": list(self.labels),
            "valencies": list(self.valencies),
            "p_tensor": self.p,
            "witness": self.witness,
        }


def check_scheme(R: RelationSet) -> SchemeReport:
    """Exhaustively check that every product A_i A_j is constant on each relation."""
    r = len(R.labels)
    A = R.matrices
    p = [[[0] * r for _ in range(r)] for _ in range(r)]
    masks = [R.relation == k for k in range(r)]
    for i in range(r):
        for j in range(i, r):
            C = exact_matmul(A[i], A[j])
            for k in range(r):
                vals = C[masks[k]]
                lo, hi = int(vals.min()), int(vals.max())
                if lo != hi:
                    a = np.argwhere(masks[k] & (C == lo))[0]
                    b = np.argwhere(masks[k] & (C == hi))[0]
                    return SchemeReport(False, R.valencies, R.labels, witness={
                        "i": R.labels[i], "j": R.labels[j], "k": R.labels[k],
                        "pairs": [[int(a[0]), int(a[1])], [int(b[0]), int(b[1])]],
                        "counts": [lo, hi],
                    })
                p[k][i][j] = p[k][j][i] = lo
    return SchemeReport(True, R.valencies, R.labels, p=p)


def tensor_identities(report: SchemeReport) -> dict[str, bool]:
    """Standard identities every intersection-number tensor must satisfy."""
    p, n = report.p, report.valencies
    r = range(len(n))
    return {
        "symmetric": all(p[k][i][j] == p[k][j][i] for i in r for j in r for k in r),
        "p0_delta": all(p[k][0][j] == (j == k) for j in r for k in r),
        "row_sums": all(sum(p[k][i][j] for j in r) == n[i] for i in r for k in r),
        "valency_exchange": all(p[k][i][j] * n[k] == p[j][i][k] * n[j] for i in r for j in r for k in r),
    }


# -- eigenvalues ----------------------------------------------------------------


def _charpoly(M: list[list[int]]) -> list[int]:
    return [int(c) for c in _dm(M, ZZ).charpoly()]


def _poly_eval(coeffs: list[int], x: int) -> int:
    v = 0
    for c in coeffs:
        v = v * x + c
    return v


def integer_roots(coeffs: list[int], bound: int) -> list[int]:
    """Integer roots (with multiplicity) of a monic integer polynomial.

    Candidates are 0 and the divisors of the lowest nonzero coefficient
    up to ``bound`` in absolute value.
    """
    coeffs = list(coeffs)
    roots = []
    while coeffs and coeffs[-1] == 0:
        roots.append(0)
        coeffs.pop()
    if len(coeffs) <= 1:
        return roots
    c0 = abs(coeffs[-1])
    for d in range(1, min(bound, c0) + 1):
        if c0 % d:
            continue
        for x in (d, -d):
            while len(coeffs) > 1 and _poly_eval(coeffs, x) == 0:
                roots.append(x)
                # synthetic division by (X - x)
                out, acc = [], 0
                for c in coeffs[:-1]:
                    acc = acc * x + c
                    out.append(acc)
                coeffs = out
    if len(coeffs) > 1:
        raise NonIntegerEigenvalue(f"characteristic polynomial factor {coeffs} has no integer roots")
    return roots


@dataclass
class EigenData:
    labels: tuple[int, ...]
    n: int
    P: list[list[int]]  # P[m][i]: eigenvalue of A_i on eigenspace m
    Q: list[list[Fraction]]  # Q[i][m]
    multiplicities: list[int]

    def column(self, label: int) -> list[int]:
        i = self.labels.index(label)
        return [row[i] for row in self.P]

    def as_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "P": self.P,
            "Q": [[f"{v.numerator}/{v.denominator}" for v in row] for row in self.Q],
            "multiplicities": self.multiplicities,
        }


def _generic_weights(r: int):
    for base in (7, 11, 13, 17, 19, 23, 29, 31):
        yield [0] + [base**k for k in range(r - 1)]


def eigendata(report: SchemeReport) -> EigenData:
    """Exact P, Q and multiplicities from the intersection matrices."""
    if not report.is_scheme:
        raise NotAScheme("eigendata needs a verified association scheme")
    r = len(report.labels)
    n = sum(report.valencies)
    B = [report.intersection_matrix(i) for i in range(r)]
    for w in _generic_weights(r):
        M = [[sum(w[i] * B[i][k][j] for i in range(r)) for j in range(r)] for k in range(r)]
        bound = max(sum(abs(v) for v in row) for row in M)
        roots = integer_roots(_charpoly(M), bound)
        if len(set(roots)) == r:
            break
    else:  # pragma: no cover - all schemes here separate on the first try
        raise NonIntegerEigenvalue("no combination separates the eigenspaces")
    P = []
    for lam in roots:
        shifted = [[M[k][j] - (lam if k == j else 0) for j in range(r)] for k in range(r)]
        ns = _dm(shifted).nullspace().to_Matrix().tolist()
        v = [_q(x) for x in ns[0]]
        k0 = next(k for k in range(r) if v[k])
        row = []
        for i in range(r):
            val = sum(B[i][k0][j] * v[j] for j in range(r)) / v[k0]
            if val.denominator != 1:
                raise NonIntegerEigenvalue(f"eigenvalue {val} of B_{report.labels[i]}")
            row.append(int(val))
        P.append(row)
    # trivial eigenspace first (valencies), then by multiplicity and A_1 eigenvalue
    Pt = _dm([[P[m][i] for m in range(r)] for i in range(r)])
    rhs = _dm([[n]] + [[0]] * (r - 1))
    mult = [_q(x) for x in Pt.lu_solve(rhs).to_Matrix()]
    if any(m.denominator != 1 or m <= 0 for m in mult):
        raise NonIntegerEigenvalue(f"multiplicities {mult} are not positive integers")
    order = sorted(range(r), key=lambda m: (P[m] != list(report.valencies), -mult[m], -P[m][1]))
    P = [P[m] for m in order]
    mult = [int(mult[m]) for m in order]
    Q = [[v * n for v in row] for row in _to_fractions(_dm(P).inv())]
    E = EigenData(report.labels, n, P, Q, mult)
    if not pq_identity(E):
        raise NonIntegerEigenvalue("P Q != n I")  # pragma: no cover
    return E


def pq_identity(E: EigenData) -> bool:
    r = len(E.P)
    ok = all(sum(E.P[a][k] * E.Q[k][b] for k in range(r)) == (E.n if a == b else 0)
             for a in range(r) for b in range(r))
    return ok and [Fraction(m) for m in E.multiplicities] == E.Q[0]


def trace_identities(R: RelationSet, E: EigenData, powers=(1, 2, 3)) -> bool:
    """sum_m mult_m P[m][j]^s == trace(A_j^s) for the given powers."""
    for j, A in enumerate(R.matrices):
        M = np.eye(R.n, dtype=np.int64)
        for s in range(1, max(powers) + 1):
            M = exact_matmul(M, A)
            if s in powers:
                lhs = sum(m * E.P[k][j] ** s for k, m in enumerate(E.multiplicities))
                if lhs != int(np.trace(M)):
                    return False
    return True


# -- closed forms --------------------------------------------------------------

MOBIUS_EVEN, LAGUERRE_ODD, LAGUERRE_PLUS_EVEN, MINKOWSKI_EVEN = (
    "mobius_even", "laguerre_odd", "laguerre_plus_even", "minkowski_even")

FAMILY_OF = {MOBIUS: MOBIUS_EVEN, LAGUERRE: LAGUERRE_ODD,
             LAGUERRE_PLUS: LAGUERRE_PLUS_EVEN, MINKOWSKI: MINKOWSKI_EVEN}


def closed_form(family: str, q: int) -> tuple[list[list[Fraction]], list[list[Fraction]] | None]:
    """Expected (P, Q) for a family; Q is None when only P is given."""
    F = Fraction
    h = F(q, 2)
    if family == MOBIUS_EVEN:
        P = [[1, q * q - 1, h * q * (q + 1), h * (q - 1) * (q - 2)],
             [1, q - 1, -q, 0],
             [1, -2, q * F(q - 1, 2), -(q + 1) * F(q - 2, 2)],
             [1, -(q + 1), 0, q]]
        Q = [[1, h * (q * q + 1), q * q, (q * q + 1) * F(q - 2, 2)],
             [1, q * F(q * q + 1, 2 * (q + 1)), -2 * F(q * q, q * q - 1), -(q - 2) * F(q * q + 1, 2 * (q - 1))],
             [1, -F(q * q + 1, q + 1), q * F(q - 1, q + 1), 0],
             [1, 0, -q * F(q + 1, q - 1), F(q * q + 1, q - 1)]]
    elif family == LAGUERRE_ODD:
        P = [[1, q * q - 1, q * F(q * q - 1, 2), q * F((q - 1) ** 2, 2)],
             [1, -1, q * F(q - 1, 2), -q * F(q - 1, 2)],
             [1, q - 1, -q, 0],
             [1, -(q + 1), 0, q]]
        Q = P
    elif family == LAGUERRE_PLUS_EVEN:
        # relations (0, 2, 3); A_2 = J - I - A_3
        k3 = (q - 1) ** 2 * h
        P = [[1, F(q**3) - 1 - k3, k3],
             [1, -1 - h, h],
             [1, -1 + (q - 1) * h, -(q - 1) * h]]
        Q = None
    elif family == MINKOWSKI_EVEN:
        P = [[1, q * q - 1, q * (q + 1) * F(q - 2, 2), (q - 1) * F(q * q, 2)],
             [1, q - 1, -q, 0],
             [1, -(q + 1), 0, q],
             [1, 0, F(q * q - q - 2, 2), -(q - 1) * h]]
        Q = [[1, (q + 1) ** 2 * F(q - 2, 2), (q - 1) ** 2 * h, q * q],
             [1, (q + 1) * F(q - 2, 2), -(q - 1) * h, 0],
             [1, -(q + 1), 0, q],
             [1, 0, q - 1, -q]]
    else:
        raise ValueError(f"unknown family {family!r}")
    P = [[F(v) for v in row] for row in P]
    Q = None if Q is None else [[F(v) for v in row] for row in Q]
    return P, Q


def closed_form_multiplicities(family: str, q: int) -> list[int] | None:
    if family == LAGUERRE_PLUS_EVEN:
        return [1, (q + 1) * (q - 1) ** 2, (q - 1) * (q + 2)]
    _, Q = closed_form(family, q)
    return [int(v) for v in Q[0]]


@dataclass
class TableCheck:
    ok: bool
    diff: list[dict] = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "diff": self.diff}


def verify_closed_forms(E: EigenData, family: str, q: int) -> TableCheck:
    """Compare computed P/Q with the closed forms, matching eigenspaces by P rows.

    Expected rows are paired with computed rows holding the same eigenvalue
    vector; Q columns follow the same pairing.  Mismatches are listed as
    ``{"matrix", "row", "col", "expected", "got"}`` under our row order.
    """
    Pexp, Qexp = closed_form(family, q)
    r = len(E.P)
    diff: list[dict] = []
    if len(Pexp) != r:
        return TableCheck(False, [{"matrix": "shape", "expected": len(Pexp), "got": r}])
    rows = [list(map(Fraction, row)) for row in E.P]
    pairing = {}
    for a, exp_row in enumerate(Pexp):
        hit = next((m for m in range(r) if rows[m] == exp_row and m not in pairing.values()), None)
        if hit is None:
            diff.append({"matrix": "P", "row": a, "col": None, "expected": [str(v) for v in exp_row],
                         "got": None})
        else:
            pairing[a] = hit
    if Qexp is not None:
        for a, m in pairing.items():
            for i in range(r):
                if Qexp[i][a] != E.Q[i][m]:
                    diff.append({"matrix": "Q", "row": i, "col": m,
                                 "expected": str(Qexp[i][a]), "got": str(E.Q[i][m])})
    mexp = closed_form_multiplicities(family, q)
    for a, m in pairing.items():
        if mexp[a] != E.multiplicities[m]:
            diff.append({"matrix": "multiplicity", "row": m, "col": None,
                         "expected": mexp[a], "got": E.multiplicities[m]})
    return TableCheck(not diff, diff)


# -- intersection matrices ----------------------------------------------------------


def base_circles(n: int, count: int = 5) -> list[int]:
    """Deterministic spread of base circles."""
    return sorted({(k * n) // count for k in range(min(count, n))})


def intersection_matrix_check(R: RelationSet, report: SchemeReport, E: EigenData,
                              B: list[list[list[int]]] | None = None) -> bool:
    """A_i T_x = T_x B_i for five base circles, and Q's columns are eigenvectors of each B_i."""
    if not report.is_scheme:
        raise NotAScheme("intersection matrices need a verified scheme")
    r = len(R.labels)
    B = B if B is not None else [report.intersection_matrix(i) for i in range(r)]
    Bn = [np.array(b, dtype=np.int64) for b in B]
    for x in base_circles(R.n):
        T = np.stack([(R.relation[x] == k).astype(np.int64) for k in range(r)], axis=1)
        for i in range(r):
            if not np.array_equal(exact_matmul(R.matrices[i], T), T @ Bn[i]):
                return False
    for i in range(r):
        for m in range(r):
            col = [E.Q[k][m] for k in range(r)]
            lhs = [sum(B[i][k][j] * col[j] for j in range(r)) for k in range(r)]
            if lhs != [E.P[m][i] * c for c in col]:
                return False
    return True


# -- spectral closure and eigenvalue counts ----------------------------------------


def spectral_closure(A: np.ndarray, eigenvalues) -> bool:
    """Check prod over distinct eigenvalues of (A - lambda I) is the zero matrix."""
    n = A.shape[0]
    I = np.eye(n, dtype=np.int64)
    M = I
    for lam in sorted(set(int(v) for v in eigenvalues)):
        M = exact_matmul(M, A - lam * I)
    return not np.any(M)


def _hankel_rank(traces: list[int], k: int) -> int:
    H = [[traces[i + j] for j in range(k)] for i in range(k)]
    return _dm(H, ZZ).rank()


def distinct_eigenvalue_count(A: np.ndarray, limit: int = 64) -> int:
    """Number of distinct eigenvalues of a symmetric integer matrix.

    Equal to the rank of the Gram matrix of I, A, A^2, ...; for symmetric A
    the Gram entries are the traces tr(A^(i+j)).  The size grows until the
    rank stops increasing.
    """
    powers = [np.eye(A.shape[0], dtype=np.int64)]
    traces: list[int] = []

    def need(m):
        while len(powers) <= m:
            powers.append(exact_matmul(powers[-1], A))

    def gram(i, j):
        need(max(i, j))
        a, b = powers[i].astype(object).ravel(), powers[j].astype(object).ravel()
        return int(a.dot(b))

    rank = 1
    for k in range(2, limit + 1):
        while len(traces) < 2 * k - 1:
            m = len(traces)
            traces.append(gram(m // 2, m - m // 2))
        new = _hankel_rank(traces, k)
        if new == rank:
            return rank
        rank = new
    raise ArithmeticError("eigenvalue count exceeds limit")


# -- bounds -----------------------------------------------------------------------


def hoffman_bound(E: EigenData, weights: dict[int, Fraction | int]) -> Fraction:
    """Ratio bound for cocliques of sum(w_label * A_label), weights keyed by relation label."""
    if not isinstance(E, EigenData):
        raise NotAScheme("Hoffman bound needs eigendata of a verified scheme")
    if not weights or any(Fraction(w) < 0 for w in weights.values()) or not any(weights.values()):
        raise ValueError("weights must be nonnegative and not all zero")
    if 0 in weights:
        raise ValueError("the identity relation cannot be weighted")
    idx = {E.labels.index(lab): Fraction(w) for lab, w in weights.items()}
    eig = [sum(w * row[i] for i, w in idx.items()) for row in E.P]
    k, tau = eig[0], min(eig[1:])
    if tau >= 0:
        return Fraction(E.n)
    return Fraction(E.n) / (1 + k / (-tau))


def clique_coclique_bound(n: int, clique_size: int) -> int:
    return n // clique_size


def delsarte_lp_bound(E: EigenData, allowed) -> Fraction:
    """max sum(a) with a_0 = 1, a >= 0, a_i = 0 off ``allowed``, a Q >= 0.

    Solved exactly by enumerating every vertex of the feasible region.
    ``allowed`` holds relation labels and must contain 0.
    """
    allowed = set(allowed)
    if 0 not in allowed:
        raise ValueError("allowed relations must contain 0")
    r = len(E.labels)
    free = [E.labels.index(lab) for lab in sorted(allowed - {0}) if lab in E.labels]
    f = len(free)
    if f == 0:
        return Fraction(1)
    # constraints g . x >= h over the free variables x
    cons = []
    for t in range(f):
        cons.append(([Fraction(int(s == t)) for s in range(f)], Fraction(0)))
    for m in range(r):
        cons.append(([E.Q[i][m] for i in free], -E.Q[0][m]))
    best = None
    for sel in combinations(range(len(cons)), f):
        G = _dm([cons[c][0] for c in sel])
        if G.rank() < f:
            continue
        h = _dm([[cons[c][1]] for c in sel])
        x = [_q(v) for v in G.lu_solve(h).to_Matrix()]
        if all(sum(g[s] * x[s] for s in range(f)) >= hv for g, hv in cons):
            val = 1 + sum(x)
            best = val if best is None else max(best, val)
    return best


# -- incidence matrix --------------------------------------------------------------


@dataclass
class IdentityReport:
    identities: dict[str, bool]
    rank: int

    @property
    def ok(self) -> bool:
        return all(self.identities.values())

    def as_dict(self) -> dict:
        return {"identities": self.identities, "rank": self.rank}


def incidence_identities(G: CircleGeometry, R: RelationSet) -> IdentityReport:
    """Gram identities of the circle/point incidence matrix W and rank(W)."""
    W = G.incidence
    q = G.q
    WWt = exact_matmul(W, W.T)
    WtW = exact_matmul(W.T, W)
    A = {lab: R.matrices[i] for i, lab in enumerate(R.labels)}
    I_c = np.eye(G.n_circles, dtype=np.int64)
    ids = {}
    if G.kind == LAGUERRE_PLUS:
        ids["WWt=(q+2)I+2A2"] = np.array_equal(WWt, (q + 2) * I_c + 2 * A[2])
    else:
        ids["WWt=(q+1)I+A1+2A2"] = np.array_equal(WWt, (q + 1) * I_c + A[1] + 2 * A[2])
    if G.kind == MOBIUS:
        n = G.n_points
        ids["WtW=(q^2-1)I+(q+1)J"] = np.array_equal(
            WtW, (q * q - 1) * np.eye(n, dtype=np.int64) + (q + 1) * np.ones((n, n), dtype=np.int64))
    ids["row_sums"] = bool((W.sum(axis=1) == len(G.circles[0])).all())
    return IdentityReport(ids, exact_rank(WtW))


def expected_rank(kind: str, q: int) -> int | None:
    if kind == MOBIUS:
        return q * q + 1
    if kind == LAGUERRE and q % 2:
        return q * q
    if kind == LAGUERRE_PLUS:
        return q * q + q - 1
    return None


# -- one-shot analysis --------------------------------------------------------------


@dataclass
class Analysis:
    relations: RelationSet
    report: SchemeReport
    eigen: EigenData | None


def analyze(G: CircleGeometry) -> Analysis:
    R = relations(G)
    rep = check_scheme(R)
    return Analysis(R, rep, eigendata(rep) if rep.is_scheme else None)


def scheme_json(G: CircleGeometry, A: Analysis, identities: dict[str, bool] | None = None) -> dict:
    doc = {"geometry": {"kind": G.kind, "order": G.q, "model": G.model, "hash": G.fingerprint()}}
    doc.update(A.report.as_dict())
    if A.eigen is not None:
        doc.update(A.eigen.as_dict())
    doc["identities"] = identities or {}
    return doc


# -- closed-form tensor --------------------------------------------------------------


def expected_tensor(family: str, q: int) -> list[list[list[int]]]:
    """p^k_{ij} implied by the closed-form P and multiplicities.

    Uses p^k_{ij} = (1 / (n n_k)) sum_m mult_m P_m(i) P_m(j) P_m(k).
    """
    P, _ = closed_form(family, q)
    mult = closed_form_multiplicities(family, q)
    n = sum(mult)
    r = len(P)
    val = [P[0][i] for i in range(r)]
    out = [[[None] * r for _ in range(r)] for _ in range(r)]
    for k in range(r):
        for i in range(r):
            for j in range(r):
                s = sum(mult[m] * P[m][i] * P[m][j] * P[m][k] for m in range(r)) / (n * val[k])
                out[k][i][j] = int(s) if s.denominator == 1 else s
    return out


def tensor_diff(report: SchemeReport, family: str, q: int) -> list[dict]:
    exp = expected_tensor(family, q)
    if not report.is_scheme:
        return [{"field": "is_scheme", "expected": True, "got": False}]
    lab = report.labels
    return [{"field": f"p^{lab[k]}_{lab[i]}{lab[j]}", "expected": str(exp[k][i][j]), "got": report.p[k][i][j]}
            for k in range(len(lab)) for i in range(len(lab)) for j in range(len(lab))
            if exp[k][i][j] != report.p[k][i][j]]
