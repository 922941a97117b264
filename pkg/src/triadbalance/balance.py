"""Balance measures for signed digraphs, evaluated on transitive triples.

A transitive triple is balanced when it carries an even number of negative
edges.  A triad's partial balance is the fraction of its triples that are
balanced; a triad is completely balanced at ratio 1, completely imbalanced
at ratio 0, and partially balanced in between.  Graph-level figures come in
three modes: the type-mean (unweighted mean over the per-type ratios of the
types that occur), the triad-mean (mean of per-triad ratios), and the
non-partial ratio (fraction of triads that are completely balanced).  The
undirected counterpart scores each triangle of the projected graph by the
product of its edge signs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .census import (CLASSIFICATIONS, TRANSITIVE_TYPES, Triad, Triple,
                     scan_triads, transitive_triples)
from .errors import UndefinedResultError
from .graphs import SignedDigraph, SignedGraph

BALANCE_MODES = ("type-mean", "triad-mean")


def triple_is_balanced(triple: Triple | Sequence[int]) -> bool:
    """Even number of negative edges <=> balanced."""
    signs = triple.signs if isinstance(triple, Triple) else tuple(triple)
    return sum(1 for s in signs if s < 0) % 2 == 0


@dataclass(frozen=True)
class TriadBalance:
    triad: Triad
    balanced_triples: int
    total_triples: int
    ratio: float
    classification: str


@dataclass(frozen=True)
class TypeBalance:
    type: str
    triad_count: int
    balanced_triples: int
    total_triples: int
    #: None when no triad of this type occurs (never reported as 0)
    ratio: float | None


def triad_balance(graph: SignedDigraph, triad: Triad) -> TriadBalance:
    """Partial balance of one transitive triad."""
    triples = transitive_triples(graph, triad)
    balanced = sum(1 for t in triples if triple_is_balanced(t))
    total = len(triples)
    if balanced == total:
        cls = "completely_balanced"
    elif balanced == 0:
        cls = "completely_imbalanced"
    else:
        cls = "partially_balanced"
    return TriadBalance(triad, balanced, total, balanced / total, cls)


def type_balance(graph: SignedDigraph, workers: int = 1) -> list[TypeBalance]:
    """Per-type triad counts and triple-weighted balance ratios.

    All triads of one type carry the same number of triples, so the
    triple-weighted ratio coincides with the mean of per-triad ratios
    within the type.
    """
    tallies = scan_triads(graph, workers=workers, transitive_only=True)
    return _type_balance_from_tallies(tallies)


def _type_balance_from_tallies(tallies) -> list[TypeBalance]:
    result = []
    for cls in TRANSITIVE_TYPES:
        count = tallies.type_triads.get(cls, 0)
        balanced = tallies.type_balanced.get(cls, 0)
        total = tallies.type_triples.get(cls, 0)
        ratio = balanced / total if total else None
        result.append(TypeBalance(cls, count, balanced, total, ratio))
    return result


def aggregate_type_mean(entries: Iterable[tuple[float | None, int]]) -> float:
    """Unweighted mean of per-type ratios over the types that occur.

    Accepts (ratio, triad_count) pairs; types with zero triads are excluded
    from the denominator.
    """
    present = [ratio for ratio, count in entries if count > 0]
    if not present:
        raise UndefinedResultError("no transitive triads: type-mean undefined")
    if any(r is None for r in present):
        raise ValueError("present type with undefined ratio")
    return math.fsum(present) / len(present)


def overall_balance(graph: SignedDigraph, mode: str = "type-mean",
                    workers: int = 1) -> float:
    """Graph-level partial balance.

    type-mean: unweighted mean of per-type ratios over the occurring types.
    triad-mean: mean of per-triad ratios over all transitive triads.
    """
    if mode not in BALANCE_MODES:
        raise ValueError(f"unknown balance mode {mode!r}")
    tallies = scan_triads(graph, workers=workers, transitive_only=True)
    if tallies.transitive_triads == 0:
        raise UndefinedResultError("no transitive triads: balance undefined")
    if mode == "type-mean":
        return aggregate_type_mean(
            (tb.ratio, tb.triad_count) for tb in _type_balance_from_tallies(tallies))
    return tallies.triad_ratio_sum / tallies.transitive_triads


def nonpartial_balance(graph: SignedDigraph,
                       workers: int = 1) -> tuple[float, int, int]:
    """Binary scoring: a triad counts as balanced only when completely so.

    Returns (ratio, balanced_count, imbalanced_count).
    """
    tallies = scan_triads(graph, workers=workers, transitive_only=True)
    total = tallies.transitive_triads
    if total == 0:
        raise UndefinedResultError("no transitive triads: balance undefined")
    balanced = tallies.classification["completely_balanced"]
    return balanced / total, balanced, total - balanced


def undirected_balance(graph: SignedGraph) -> tuple[int, int, int, float | None]:
    """Triangle balance on the undirected projection.

    A triangle is balanced when the product of its three edge signs is
    positive.  Returns (triangle_count, balanced, imbalanced, ratio); the
    ratio is None when the graph has no triangles.
    """
    sign = graph.sign
    balanced = 0
    total = 0
    for i, j, k in graph.triangles():
        total += 1
        if sign[(i, j)] * sign[(i, k)] * sign[(j, k)] > 0:
            balanced += 1
    ratio = balanced / total if total else None
    return total, balanced, total - balanced, ratio


@dataclass
class BalanceReport:
    """All balance figures of one analysis run."""

    per_type: list[TypeBalance]
    overall_type_mean: float
    overall_triad_mean: float
    nonpartial: tuple[float, int, int]
    classification_counts: dict
    undirected: tuple[int, int, int, float | None] | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "per_type": [
                {"type": tb.type, "count": tb.triad_count, "ratio": tb.ratio}
                for tb in self.per_type
            ],
            "overall_type_mean": self.overall_type_mean,
            "overall_triad_mean": self.overall_triad_mean,
            "nonpartial": {
                "ratio": self.nonpartial[0],
                "balanced": self.nonpartial[1],
                "imbalanced": self.nonpartial[2],
            },
            "classification_counts": dict(self.classification_counts),
        }
        if self.undirected is not None:
            t, b, i, r = self.undirected
            doc["undirected"] = {"triangles": t, "balanced": b,
                                 "imbalanced": i, "ratio": r}
        return doc

    def to_csv_rows(self) -> list[list]:
        """Flat per-type view: type, ratio (2 decimals), triad count."""
        rows = [["type", "ratio", "triads"]]
        for tb in self.per_type:
            shown = "" if tb.ratio is None else f"{tb.ratio:.2f}"
            rows.append([tb.type, shown, tb.triad_count])
        total = sum(tb.triad_count for tb in self.per_type)
        rows.append(["average", f"{self.overall_type_mean:.2f}", total])
        return rows


def build_report(graph: SignedDigraph, workers: int = 1,
                 undirected: SignedGraph | None = None) -> BalanceReport:
    """Single-pass balance report; raises when no transitive triad exists."""
    tallies = scan_triads(graph, workers=workers, transitive_only=True)
    if tallies.transitive_triads == 0:
        raise UndefinedResultError("no transitive triads: balance undefined")
    per_type = _type_balance_from_tallies(tallies)
    type_mean = aggregate_type_mean((tb.ratio, tb.triad_count) for tb in per_type)
    triad_mean = tallies.triad_ratio_sum / tallies.transitive_triads
    balanced = tallies.classification["completely_balanced"]
    nonpartial = (balanced / tallies.transitive_triads, balanced,
                  tallies.transitive_triads - balanced)
    report = BalanceReport(
        per_type=per_type,
        overall_type_mean=type_mean,
        overall_triad_mean=triad_mean,
        nonpartial=nonpartial,
        classification_counts={c: tallies.classification[c] for c in CLASSIFICATIONS},
    )
    if undirected is not None:
        report.undirected = undirected_balance(undirected)
    return report
