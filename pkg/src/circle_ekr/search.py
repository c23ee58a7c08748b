"""Exact maximum t-intersecting families and enumeration of all maximum families.

Families of circles that pairwise share at least t points are cliques in
the t-agreement graph.  The solver is a bitset branch-and-bound in the
style of MCQ/BBMC: vertices are relabelled by non-increasing degree and
greedy sequential colouring bounds the clique that can still be added.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field as dc_field

from .errors import BudgetExceeded
from .geometry import LAGUERRE, LAGUERRE_PLUS, CircleGeometry, bits
from .pg import _row_mask

PENCIL, NUCLEUS, OTHER = "pencil", "nucleus", "other"


@dataclass(frozen=True)
class SearchBudget:
    nodes: int = 10**8
    seconds: float = 15 * 60
    lower_bound: int = 0


@dataclass
class FamilyWitness:
    circles: tuple[int, ...]
    optimal: bool = False
    label: str = OTHER
    anchor: int | None = None
    nodes: int = 0

    @property
    def size(self) -> int:
        return len(self.circles)

    @property
    def tag(self) -> str:
        return self.label if self.anchor is None else f"{self.label}({self.anchor})"

    def as_dict(self) -> dict:
        return {"circles": list(self.circles), "label": self.tag}


# -- graphs ------------------------------------------------------------------


def agreement_graph(G: CircleGeometry, t: int) -> list[int]:
    """Bitset rows: circles i != j adjacent iff they share at least t points."""
    X = G.intersections >= t
    X[range(len(X)), range(len(X))] = False
    return [_row_mask(r) for r in X]


def disjointness_graph(G: CircleGeometry) -> list[int]:
    X = G.intersections == 0
    return [_row_mask(r) for r in X]


# -- branch and bound ------------------------------------------------------------


class _Budget:
    def __init__(self, budget: SearchBudget):
        self.limit = budget.nodes
        self.deadline = time.monotonic() + budget.seconds
        self.nodes = 0

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.limit:
            return False
        if not self.nodes & 1023 and time.monotonic() > self.deadline:
            return False
        return True


class _Stop(Exception):
    pass


def _relabel(adj: list[int], pool: int):
    """Order the pool vertices by non-increasing degree inside the pool (ties by index)."""
    verts = list(bits(pool))
    verts.sort(key=lambda v: (-(adj[v] & pool).bit_count(), v))
    pos = {v: i for i, v in enumerate(verts)}
    new = []
    for v in verts:
        m = 0
        for u in bits(adj[v] & pool):
            m |= 1 << pos[u]
        new.append(m)
    return verts, new


def _color_sort(P: int, N: list[int], kmin: int):
    """Greedy colouring of P; returns vertices with colour >= kmin and their colours."""
    order, colors = [], []
    U, k = P, 0
    while U:
        k += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~N[v]
            Q ^= low
            U ^= low
            if k >= kmin:
                order.append(v)
                colors.append(k)
    return order, colors


def _max_clique(N: list[int], P: int, lower: int, budget: _Budget):
    """Largest clique in P if larger than ``lower``; else None.  Raises _Stop on budget."""
    best: list[int] = []
    best_size = lower
    C: list[int] = []

    def expand(P):
        nonlocal best, best_size
        if not budget.tick():
            raise _Stop
        order, colors = _color_sort(P, N, best_size - len(C))
        for idx in range(len(order) - 1, -1, -1):
            if len(C) + colors[idx] <= best_size:
                return
            v = order[idx]
            C.append(v)
            nP = P & N[v]
            if nP:
                expand(nP)
            elif len(C) > best_size:
                best, best_size = list(C), len(C)
            C.pop()
            P &= ~(1 << v)

    try:
        expand(P)
    except _Stop:
        return best or None, False
    return best or None, True


def _all_cliques(N: list[int], P: int, K: int, budget: _Budget, sink: list):
    C: list[int] = []

    def expand(P):
        if not budget.tick():
            raise _Stop
        if len(C) == K:
            sink.append(list(C))
            return
        order, colors = _color_sort(P, N, K - len(C))
        for idx in range(len(order) - 1, -1, -1):
            if len(C) + colors[idx] < K:
                return
            v = order[idx]
            C.append(v)
            expand(P & N[v])
            C.pop()
            P &= ~(1 << v)

    expand(P)


def max_clique(adj: list[int], budget: SearchBudget = SearchBudget(), root: int | None = None,
               seed: list[int] | None = None) -> tuple[list[int], bool, int]:
    """Maximum clique of a graph given by bitset rows.

    With ``root`` the search is restricted to cliques through that vertex,
    which is exact for vertex-transitive graphs.  ``seed`` is a known clique
    used as the initial incumbent.  Returns (clique, optimal, nodes).
    """
    n = len(adj)
    pool = adj[root] if root is not None else (1 << n) - 1
    fixed = [root] if root is not None else []
    incumbent = sorted(seed) if seed else []
    lower = max(len(incumbent) - len(fixed), budget.lower_bound - len(fixed), 0)
    verts, N = _relabel(adj, pool)
    b = _Budget(budget)
    found, complete = _max_clique(N, (1 << len(verts)) - 1, lower, b)
    if found is not None and len(found) + len(fixed) > len(incumbent):
        incumbent = sorted(fixed + [verts[i] for i in found])
    return incumbent, complete, b.nodes


def cliques_of_size(adj: list[int], K: int, budget: SearchBudget = SearchBudget()) -> list[list[int]]:
    """All cliques with exactly K vertices, sorted.  Raises BudgetExceeded on limits."""
    n = len(adj)
    verts, N = _relabel(adj, (1 << n) - 1)
    b = _Budget(budget)
    sink: list = []
    try:
        _all_cliques(N, (1 << n) - 1, K, b, sink)
    except _Stop:
        found = sorted(sorted(verts[i] for i in c) for c in sink)
        raise BudgetExceeded(f"enumeration stopped after {b.nodes} nodes", result=found) from None
    return sorted(sorted(verts[i] for i in c) for c in sink)


# -- circle families ---------------------------------------------------------------


def circles_per_point(G: CircleGeometry) -> int:
    return G.point_circles[0].bit_count()


def seed_families(G: CircleGeometry, t: int) -> list[list[int]]:
    """Pencils through one point (t=1) or two non-parallel points (t=2)."""
    if t == 1:
        return [G.pencil(p) for p in range(G.n_points)]
    out = []
    p = 0
    for x in range(1, G.n_points):
        if not G.parallel_mask[p] >> x & 1:
            out.append(G.circles_through(p, x))
    return out


def max_t_intersecting(G: CircleGeometry, t: int, budget: SearchBudget = SearchBudget(),
                       raise_on_budget: bool = True) -> FamilyWitness:
    """Largest family of circles pairwise sharing at least ``t`` points."""
    adj = agreement_graph(G, t)
    seeds = seed_families(G, t)
    seed = max(seeds, key=len) if seeds else []
    root = 0 if G.vertex_transitive else None
    if root is not None:
        seed = next((s for s in seeds if 0 in s and len(s) == len(seed)), seed if 0 in seed else [0])
    clique, optimal, nodes = max_clique(adj, budget, root=root, seed=seed)
    W = classify_family(G, clique)
    W.optimal, W.nodes = optimal, nodes
    if not optimal and raise_on_budget:
        raise BudgetExceeded(f"search stopped after {nodes} nodes; best size {W.size}", result=W)
    return W


def enumerate_maximum_intersecting(G: CircleGeometry, known_size: int,
                                   budget: SearchBudget = SearchBudget(), t: int = 1) -> list[FamilyWitness]:
    """All t-intersecting families of exactly ``known_size`` circles, each classified."""
    adj = agreement_graph(G, t)
    fams = cliques_of_size(adj, known_size, budget)
    out = []
    for f in fams:
        W = classify_family(G, f)
        W.optimal = True
        out.append(W)
    return out


def recheck_intersecting(G: CircleGeometry, circles, t: int = 1) -> bool:
    """Pairwise check against the raw circle point sets."""
    sets = [set(G.circles[c]) for c in circles]
    return all(len(a & b) >= t for i, a in enumerate(sets) for b in sets[i + 1:])


def classify_family(G: CircleGeometry, F) -> FamilyWitness:
    F = tuple(sorted(F))
    if F:
        common = G.circle_masks[F[0]]
        for c in F[1:]:
            common &= G.circle_masks[c]
        if common and len(F) == circles_per_point(G):
            p = next(bits(common))
            if all(G.circle_masks[c] >> p & 1 for c in F):
                return FamilyWitness(F, label=PENCIL, anchor=p)
        if G.kind in (LAGUERRE, LAGUERRE_PLUS) and G.nucleus_map is not None and len(F) == G.q**2:
            nuc = {G.nucleus_map[c] for c in F}
            if len(nuc) == 1:
                return FamilyWitness(F, label=NUCLEUS, anchor=nuc.pop())
    return FamilyWitness(F)


def label_counts(ws: list[FamilyWitness]) -> dict[str, int]:
    out: dict[str, int] = {}
    for w in ws:
        out[w.label] = out.get(w.label, 0) + 1
    return dict(sorted(out.items()))


# -- serialization ------------------------------------------------------------------


def result_json(G: CircleGeometry, t: int, witnesses: list[FamilyWitness], budget: SearchBudget) -> dict:
    return {
        "geometry": {"kind": G.kind, "order": G.q, "model": G.model, "hash": G.fingerprint()},
        "t": t,
        "size": witnesses[0].size if witnesses else 0,
        "optimal": all(w.optimal for w in witnesses),
        "budget": {"nodes": budget.nodes, "seconds": budget.seconds},
        "witnesses": [w.as_dict() for w in witnesses],
    }


@dataclass
class TableRow:
    q: int
    size: int
    bound: int | str
    runtime_ms: int | None = None
    optimal: bool = True
    extra: dict = dc_field(default_factory=dict)


def table_csv(rows: list[TableRow], timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "size", "bound", "runtime_ms"])
    for r in rows:
        w.writerow([r.q, r.size, r.bound, r.runtime_ms if timing and r.runtime_ms is not None else ""])
    return buf.getvalue()

