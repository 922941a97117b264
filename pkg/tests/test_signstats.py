from collections import deque
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triadbalance import (SignedDigraph, composition_directed,
                          composition_undirected, metrics,
                          project_undirected, scan_triads)
from triadbalance.errors import UndefinedResultError
from triadbalance.oracle import random_signed_digraph


def test_composition_all_positive():
    g = SignedDigraph([("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])
    table = composition_directed(g)
    assert table.proportions == {"+++": 1.0, "+--": 0.0, "++-": 0.0, "---": 0.0}
    assert table.total == 1


def test_composition_single_030T_one_pos_two_neg():
    g = SignedDigraph([("a", "b", 1), ("b", "c", -1), ("a", "c", -1)])
    table = composition_directed(g)
    assert table.proportions["+--"] == 1.0


def test_composition_zero_triples():
    g = SignedDigraph([("a", "b", 1)])
    table = composition_directed(g)
    assert table.total == 0
    assert all(v == 0.0 for v in table.proportions.values())


def test_composition_undirected_single_triangle():
    g = SignedDigraph([("a", "b", 1), ("b", "c", 1), ("a", "c", -1)])
    table = composition_undirected(project_undirected(g))
    assert table.proportions["++-"] == 1.0
    assert table.basis == "undirected-triangles"


def test_composition_undirected_two_triangles():
    g = SignedDigraph([
        ("a", "b", 1), ("b", "c", 1), ("a", "c", 1),
        ("x", "y", -1), ("y", "z", -1), ("x", "z", -1),
    ])
    table = composition_undirected(project_undirected(g))
    assert table.proportions["+++"] == 0.5
    assert table.proportions["---"] == 0.5


@given(seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_proportions_sum_to_one(seed):
    g = random_signed_digraph(12, 0.4, 0.5, seed)
    table = composition_directed(g)
    if table.total:
        assert abs(sum(table.proportions.values()) - 1.0) < 1e-9


@given(seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_balanced_share_matches_balance_module(seed):
    g = random_signed_digraph(12, 0.4, 0.4, seed)
    table = composition_directed(g)
    if not table.total:
        return
    tallies = scan_triads(g, transitive_only=True)
    balanced = sum(tallies.type_balanced.values())
    total = sum(tallies.type_triples.values())
    share = table.proportions["+++"] + table.proportions["+--"]
    assert abs(share - balanced / total) < 1e-9


@given(seed=st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_sign_flip_swaps_compositions(seed):
    g = random_signed_digraph(12, 0.4, 0.4, seed)
    flipped = SignedDigraph([(u, v, -s) for u, v, s in g.edge_items()],
                            nodes=g.ids)
    a = composition_directed(g).counts
    b = composition_directed(flipped).counts
    assert a["+++"] == b["---"] and a["---"] == b["+++"]
    assert a["++-"] == b["+--"] and a["+--"] == b["++-"]
    assert sum(a.values()) == sum(b.values())


# -- descriptive metrics -----------------------------------------------------------


def test_metrics_complete_mutual_graph():
    nodes = [f"n{i}" for i in range(5)]
    g = SignedDigraph([(u, v, 1) for u in nodes for v in nodes if u != v])
    m = metrics(g)
    assert m.transitivity == 1.0
    assert m.density == 1.0
    assert m.clustering_coefficient == 1.0
    assert m.avg_path_length == 1.0
    assert m.component_count == 1


def test_metrics_path_skeleton():
    g = SignedDigraph([("a", "b", 1), ("b", "c", 1), ("c", "d", 1)])
    m = metrics(g)
    # ordered-pair distances on the path: 2*(1+2+3+1+2+1) / 12
    assert m.avg_path_length == pytest.approx(20 / 12)
    assert m.transitivity == 0.0


def test_metrics_density_on_digraph():
    g = SignedDigraph([("a", "b", 1), ("b", "a", -1), ("c", "a", 1),
                       ("b", "c", 1)])
    m = metrics(g)
    assert m.density == pytest.approx(4 / 6)


def test_metrics_component_count_of_input():
    g = SignedDigraph([("a", "b", 1), ("b", "a", 1),
                       ("x", "y", 1), ("y", "x", 1),
                       ("p", "q", 1), ("q", "p", 1)])
    m = metrics(g)
    assert m.component_count == 3
    assert m.node_count == 2  # giant component only


def test_metrics_singleton_undefined():
    g = SignedDigraph(nodes=["a"])
    with pytest.raises(UndefinedResultError):
        metrics(g)


def _skeleton(graph):
    adj = {i: set() for i in range(graph.n_nodes)}
    for (u, v) in graph.sign:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _bfs_apl(adj, n):
    total = 0
    pairs = 0
    for s in range(n):
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        total += sum(d for node, d in dist.items() if node != s)
        pairs += len(dist) - 1
    return total / pairs


def _brute_transitivity_clustering(adj, n):
    triangles = 0
    closed_at = [0] * n
    for a, b, c in combinations(range(n), 3):
        links = (b in adj[a]) + (c in adj[a]) + (c in adj[b])
        if links == 3:
            triangles += 1
            for x in (a, b, c):
                closed_at[x] += 1
    wedges = sum(len(adj[v]) * (len(adj[v]) - 1) // 2 for v in range(n))
    transitivity = 3 * triangles / wedges if wedges else 0.0
    local = []
    for v in range(n):
        d = len(adj[v])
        local.append(2 * closed_at[v] / (d * (d - 1)) if d > 1 else 0.0)
    return transitivity, sum(local) / n


@given(seed=st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_metrics_match_brute_force(seed):
    g = random_signed_digraph(14, 0.25, 0.4, seed)
    from triadbalance.graphs import PreprocessConfig, preprocess
    giant = preprocess(g, PreprocessConfig(prune_pendants=False))
    if giant.n_nodes < 2:
        return
    m = metrics(g)
    adj = _skeleton(giant)
    n = giant.n_nodes
    assert m.avg_path_length == pytest.approx(_bfs_apl(adj, n), abs=1e-9)
    transitivity, clustering = _brute_transitivity_clustering(adj, n)
    assert m.transitivity == pytest.approx(transitivity, abs=1e-9)
    assert m.clustering_coefficient == pytest.approx(clustering, abs=1e-9)
