import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from circle_ekr import search as se
from circle_ekr.errors import BudgetExceeded
from conftest import geometry


def masks(G: nx.Graph) -> list[int]:
    n = G.number_of_nodes()
    return [sum(1 << u for u in G[v]) for v in range(n)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 24), st.floats(0.1, 0.9), st.integers(0, 10**6))
def test_max_clique_matches_networkx(n, p, seed):
    G = nx.gnp_random_graph(n, p, seed=seed)
    clique, optimal, _ = se.max_clique(masks(G))
    best = max(len(c) for c in nx.find_cliques(G))
    assert optimal and len(clique) == best
    assert all(G.has_edge(a, b) for a, b in itertools.combinations(clique, 2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 14), st.floats(0.2, 0.9), st.integers(0, 10**6), st.integers(1, 5))
def test_cliques_of_size_matches_brute_force(n, p, seed, k):
    G = nx.gnp_random_graph(n, p, seed=seed)
    expect = sorted(list(c) for c in itertools.combinations(range(n), k)
                    if all(G.has_edge(a, b) for a, b in itertools.combinations(c, 2)))
    assert se.cliques_of_size(masks(G), k) == expect


def test_budget_exceeded_carries_partial_result():
    G = nx.gnp_random_graph(60, 0.7, seed=1)
    clique, optimal, nodes = se.max_clique(masks(G), se.SearchBudget(nodes=5))
    assert not optimal and nodes > 5
    with pytest.raises(BudgetExceeded) as exc:
        se.cliques_of_size(masks(G), 12, se.SearchBudget(nodes=5))
    assert isinstance(exc.value.result, list)


def test_search_budget_on_geometry():
    G = geometry("laguerre", 7)
    with pytest.raises(BudgetExceeded) as exc:
        se.max_t_intersecting(G, 2, se.SearchBudget(nodes=3))
    W = exc.value.result
    assert not W.optimal and se.recheck_intersecting(G, W.circles, 2)


@pytest.mark.parametrize("family,q", [("mobius", 4), ("laguerre", 3), ("minkowski", 3), ("minkowski", 4)])
def test_pencils_are_maximum_intersecting(family, q):
    G = geometry(family, q)
    W = se.max_t_intersecting(G, 1)
    assert W.optimal and W.size == se.circles_per_point(G)
    assert se.recheck_intersecting(G, W.circles)
    assert W.label == se.PENCIL


def test_mobius_odd_order_beats_pencils():
    # the pencil bound needs even order; at q = 3 a larger family exists
    G = geometry("mobius", 3)
    W = se.max_t_intersecting(G, 1)
    assert W.optimal and W.size == 15 > se.circles_per_point(G)
    assert se.recheck_intersecting(G, W.circles)


def test_classify_nucleus_family():
    G = geometry("laguerre", 4)
    fam = [c for c in range(G.n_circles) if G.nucleus_map[c] == G.nucleus_map[0]]
    assert se.classify_family(G, fam).label == se.NUCLEUS
    assert se.classify_family(G, G.pencil(0)).label == se.PENCIL
    assert se.classify_family(G, fam[:-1]).label == se.OTHER


def test_table_csv_is_deterministic():
    rows = [se.TableRow(3, 4, 4, runtime_ms=17), se.TableRow(5, 7, 12, runtime_ms=99)]
    assert se.table_csv(rows) == "q,size,bound,runtime_ms\n3,4,4,\n5,7,12,\n"
    assert se.table_csv(rows, timing=True).endswith("5,7,12,99\n")
