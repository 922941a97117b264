"""Sign-composition tables and descriptive network measures.

Composition is keyed by the sign multiset of a triple or triangle
(+++, +--, ++-, ---); the positions of the signs inside the triple are
deliberately discarded.  Descriptive measures follow the usual convention
for directed data: density counts ordered pairs on the digraph, while
transitivity, clustering and path length are computed on the unsigned
undirected skeleton (any directed edge induces a skeleton edge).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .census import TriadTallies, scan_triads
from .errors import UndefinedResultError
from .graphs import (PreprocessConfig, SignedDigraph, SignedGraph, preprocess,
                     weak_components)

#: export order for composition columns
COMPOSITION_KEYS = ("+++", "+--", "++-", "---")

#: which graph realization each descriptive measure is computed on
METRIC_BASIS = {
    "density": "digraph-ordered-pairs",
    "transitivity": "undirected-skeleton",
    "clustering_coefficient": "undirected-skeleton",
    "avg_path_length": "undirected-skeleton",
}


@dataclass(frozen=True)
class CompositionTable:
    proportions: dict
    counts: dict
    basis: str  # directed-triples | undirected-triangles
    total: int

    def to_csv_row(self, network: str) -> list:
        return ([network, self.basis]
                + [f"{self.proportions[k]:.2f}" for k in COMPOSITION_KEYS]
                + [self.total])

    def to_json_dict(self) -> dict:
        return {
            "basis": self.basis,
            "total": self.total,
            "counts": {k: self.counts[k] for k in COMPOSITION_KEYS},
            "proportions": {k: self.proportions[k] for k in COMPOSITION_KEYS},
        }


def _table(counts: dict, basis: str) -> CompositionTable:
    total = sum(counts.values())
    proportions = {k: (counts.get(k, 0) / total if total else 0.0)
                   for k in COMPOSITION_KEYS}
    return CompositionTable(proportions=proportions,
                            counts={k: counts.get(k, 0) for k in COMPOSITION_KEYS},
                            basis=basis, total=total)


def composition_from_tallies(tallies: TriadTallies) -> CompositionTable:
    return _table(dict(tallies.composition), "directed-triples")


def composition_directed(graph: SignedDigraph, workers: int = 1) -> CompositionTable:
    """Sign multisets of every transitive triple across all transitive triads."""
    return composition_from_tallies(
        scan_triads(graph, workers=workers, transitive_only=True))


def composition_undirected(graph: SignedGraph) -> CompositionTable:
    """Sign multisets of all closed triangles of the projected graph."""
    sign = graph.sign
    counts = {k: 0 for k in COMPOSITION_KEYS}
    order = ("+++", "++-", "+--", "---")
    for i, j, k in graph.triangles():
        neg = ((sign[(i, j)] < 0) + (sign[(i, k)] < 0) + (sign[(j, k)] < 0))
        counts[order[neg]] += 1
    return _table(counts, "undirected-triangles")


@dataclass(frozen=True)
class GraphMetrics:
    node_count: int
    edge_count: int
    component_count: int
    transitivity: float
    density: float
    avg_path_length: float
    clustering_coefficient: float

    def to_json_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "component_count": self.component_count,
            "transitivity": self.transitivity,
            "density": self.density,
            "avg_path_length": self.avg_path_length,
            "clustering_coefficient": self.clustering_coefficient,
            "basis": dict(METRIC_BASIS),
        }

    def to_csv_rows(self) -> list[list]:
        return [
            ["measure", "value"],
            ["nodes", self.node_count],
            ["edges", self.edge_count],
            ["components", self.component_count],
            ["transitivity", f"{self.transitivity:.2f}"],
            ["density", f"{self.density:.2f}"],
            ["avg_path_length", f"{self.avg_path_length:.2f}"],
            ["clustering_coefficient", f"{self.clustering_coefficient:.2f}"],
        ]


def _skeleton_triangle_counts(graph: SignedDigraph) -> tuple[np.ndarray, int]:
    """Per-node triangle participation counts on the skeleton."""
    per_node = np.zeros(graph.n_nodes, dtype=np.int64)
    total = 0
    adj = graph.adj
    for i in range(graph.n_nodes):
        higher = {x for x in adj[i] if x > i}
        for j in higher:
            for k in adj[j] & higher:
                if k > j:
                    per_node[i] += 1
                    per_node[j] += 1
                    per_node[k] += 1
                    total += 1
    return per_node, total


def metrics(graph: SignedDigraph) -> GraphMetrics:
    """Descriptive measures, computed on the giant weakly-connected component.

    The component count refers to the graph as passed in; everything else is
    evaluated after giant-component selection (without pendant pruning).
    """
    component_count = len(weak_components(graph))
    g = preprocess(graph, PreprocessConfig(prune_pendants=False,
                                           keep_component="giant"))
    n = g.n_nodes
    if n < 2:
        raise UndefinedResultError(
            "average path length undefined for a singleton component")
    density = g.n_edges / (n * (n - 1))

    degrees = np.array([len(g.adj[i]) for i in range(n)], dtype=np.int64)
    tri_per_node, triangles = _skeleton_triangle_counts(g)
    wedges = int((degrees * (degrees - 1) // 2).sum())
    transitivity = 3 * triangles / wedges if wedges else 0.0

    with np.errstate(divide="ignore", invalid="ignore"):
        local = np.where(degrees > 1,
                         2.0 * tri_per_node / (degrees * (degrees - 1.0)), 0.0)
    clustering = float(local.mean())

    rows, cols = [], []
    for i in range(n):
        for j in g.adj[i]:
            rows.append(i)
            cols.append(j)
    mat = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                     shape=(n, n))
    dist = shortest_path(mat, method="D", directed=False, unweighted=True)
    finite = dist[np.isfinite(dist)]
    # reachable ordered pairs, excluding the diagonal
    apl = float((finite.sum()) / (len(finite) - n))
    return GraphMetrics(
        node_count=n,
        edge_count=g.n_edges,
        component_count=component_count,
        transitivity=float(transitivity),
        density=float(density),
        avg_path_length=apl,
        clustering_coefficient=clustering,
    )
