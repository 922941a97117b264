"""Command-line front end: reproducible analysis runs with report files.

Subcommands: analyze, census, compare, oracle-check, gen-random.  Every
analysis run writes a manifest recording the configuration, an input
checksum and the node/edge counts before and after preprocessing, plus the
preprocessed graph in the canonical TSV dump, so any run can be replayed
and audited.  Reports are deterministic; only the manifest carries a
timestamp.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, balance, oracle, signstats
from .census import (TRANSITIVE_TYPES, census as census_op, classify_man,
                     resolve_workers, scan_triads)
from .errors import FormatError, ParseError, UndefinedResultError
from .graphs import (INPUT_FORMATS, PreprocessConfig, SignedDigraph,
                     build_graph, cancelled_pairs, dump_tsv,
                     load_edge_records, preprocess, project_undirected)

ANALYSES = ("census", "balance", "composition", "metrics", "undirected-compare")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_TRIADS = 3

_AGGREGATE_FLAG = {"sum": "sum-then-sign", "last": "last-record",
                   "mean": "mean-then-sign"}


@dataclass
class RunConfig:
    input_path: str
    input_format: str = "tsv-sign"
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    analyses: tuple[str, ...] = ANALYSES
    balance_mode: str = "type-mean"
    out_dir: str = "reports"
    emit: tuple[str, ...] = ("json", "csv")
    workers: int | None = None

    def validate(self) -> None:
        if not self.analyses:
            raise ValueError("at least one analysis must be selected")
        unknown = set(self.analyses) - set(ANALYSES)
        if unknown:
            raise ValueError(f"unknown analyses: {sorted(unknown)}")
        if self.balance_mode not in balance.BALANCE_MODES:
            raise ValueError(f"unknown balance mode {self.balance_mode!r}")
        if not set(self.emit) <= {"json", "csv"}:
            raise ValueError("emit formats must be a subset of {json, csv}")


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _write_csv(path: Path, rows: list) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)


def _load_preprocessed(config: RunConfig) -> tuple[SignedDigraph, SignedDigraph, int]:
    records = load_edge_records(config.input_path, config.input_format)
    built = build_graph(records, config.preprocess)
    pre = preprocess(built, config.preprocess)
    return built, pre, len(records)


def compare_report(graph: SignedDigraph, workers: int = 1) -> dict:
    """Side-by-side directed-partial / directed-non-partial / undirected
    figures, plus the projection's cancellation and inflation artefacts."""
    report = balance.build_report(graph, workers=workers)
    projected = project_undirected(graph)
    und = balance.undirected_balance(projected)

    # every projected triangle has all three dyads connected in the digraph,
    # so it maps onto a digraph triad whose class may or may not be transitive
    undirected_only = []
    for i, j, k in projected.triangles():
        tri = (projected.ids[i], projected.ids[j], projected.ids[k])
        if classify_man(graph, *tri) not in TRANSITIVE_TYPES:
            undirected_only.append(list(tri))

    cancelled = [list(p) for p in cancelled_pairs(graph)]
    return {
        "directed_partial": {
            "ratio": report.overall_type_mean,
            "classification_counts": report.classification_counts,
        },
        "directed_nonpartial": {
            "ratio": report.nonpartial[0],
            "balanced": report.nonpartial[1],
            "imbalanced": report.nonpartial[2],
        },
        "undirected": {
            "triangles": und[0],
            "balanced": und[1],
            "imbalanced": und[2],
            "ratio": und[3],
        },
        "cancelled_edges": cancelled,
        "undirected_only_triangles": sorted(undirected_only),
        "identical_realizations": not cancelled and not undirected_only,
    }


def _compare_csv_rows(doc: dict) -> list:
    header = ["partial_br", "completely_balanced", "partially_balanced",
              "completely_imbalanced", "nonpartial_br", "nonpartial_bt",
              "nonpartial_it", "undirected_br", "undirected_bt",
              "undirected_it"]
    cc = doc["directed_partial"]["classification_counts"]
    und = doc["undirected"]
    row = [f"{doc['directed_partial']['ratio']:.2f}",
           cc["completely_balanced"], cc["partially_balanced"],
           cc["completely_imbalanced"],
           f"{doc['directed_nonpartial']['ratio']:.2f}",
           doc["directed_nonpartial"]["balanced"],
           doc["directed_nonpartial"]["imbalanced"],
           "" if und["ratio"] is None else f"{und['ratio']:.2f}",
           und["balanced"], und["imbalanced"]]
    return [header, row]


def run(config: RunConfig) -> int:
    """Execute the selected analyses and write one report file per analysis."""
    try:
        config.validate()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if not os.path.exists(config.input_path):
        print(f"error: input file not found: {config.input_path}",
              file=sys.stderr)
        return EXIT_INPUT
    try:
        built, pre, n_records = _load_preprocessed(config)
    except (ParseError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    out_dir = Path(config.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {out_dir}: {exc}",
              file=sys.stderr)
        return EXIT_INPUT
    workers = resolve_workers(config.workers)
    emit_json = "json" in config.emit
    emit_csv = "csv" in config.emit
    written: list[str] = []

    dump_tsv(pre, out_dir / "graph.tsv")
    written.append("graph.tsv")

    needs_balance = {"balance", "composition", "undirected-compare"} \
        & set(config.analyses)
    tallies = None
    if needs_balance:
        tallies = scan_triads(pre, workers=workers, transitive_only=True)
        if "balance" in config.analyses or "undirected-compare" in config.analyses:
            if tallies.transitive_triads == 0:
                print("error: the preprocessed graph contains no transitive "
                      "triads; balance is undefined", file=sys.stderr)
                return EXIT_NO_TRIADS

    if "census" in config.analyses:
        table = census_op(pre, workers=workers)
        if emit_csv:
            _write_csv(out_dir / "census.csv",
                       [["triad_type", "count"]] + [list(r) for r in table.to_csv_rows()])
            written.append("census.csv")
        if emit_json:
            _write_json(out_dir / "census.json",
                        {"n_nodes": table.n_nodes,
                         "include_disconnected": table.include_disconnected,
                         "counts": table.counts})
            written.append("census.json")

    if "balance" in config.analyses:
        projected = (project_undirected(pre)
                     if "undirected-compare" in config.analyses else None)
        report = balance.build_report(pre, workers=workers, undirected=projected)
        doc = report.to_json_dict()
        doc["mode"] = config.balance_mode
        doc["overall_balance"] = (report.overall_type_mean
                                  if config.balance_mode == "type-mean"
                                  else report.overall_triad_mean)
        if emit_json:
            _write_json(out_dir / "balance.json", doc)
            written.append("balance.json")
        if emit_csv:
            _write_csv(out_dir / "balance.csv", report.to_csv_rows())
            written.append("balance.csv")

    if "composition" in config.analyses:
        table = signstats.composition_from_tallies(tallies)
        und_table = signstats.composition_undirected(project_undirected(pre))
        name = Path(config.input_path).stem
        if emit_csv:
            rows = [["network", "basis", "ppp", "pnn", "ppn", "nnn", "total"],
                    table.to_csv_row(name), und_table.to_csv_row(name)]
            _write_csv(out_dir / "composition.csv", rows)
            written.append("composition.csv")
        if emit_json:
            _write_json(out_dir / "composition.json",
                        {"network": name,
                         "directed": table.to_json_dict(),
                         "undirected": und_table.to_json_dict()})
            written.append("composition.json")

    if "metrics" in config.analyses:
        try:
            measured = signstats.metrics(pre)
        except UndefinedResultError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NO_TRIADS
        if emit_json:
            _write_json(out_dir / "metrics.json", measured.to_json_dict())
            written.append("metrics.json")
        if emit_csv:
            _write_csv(out_dir / "metrics.csv", measured.to_csv_rows())
            written.append("metrics.csv")

    if "undirected-compare" in config.analyses:
        doc = compare_report(pre, workers=workers)
        if emit_json:
            _write_json(out_dir / "compare.json", doc)
            written.append("compare.json")
        if emit_csv:
            _write_csv(out_dir / "compare.csv", _compare_csv_rows(doc))
            written.append("compare.csv")

    manifest = {
        "tool": "triadbalance",
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "input": {
            "path": os.path.abspath(config.input_path),
            "sha256": _sha256(config.input_path),
            "format": config.input_format,
            "records": n_records,
        },
        "config": {
            "sign_threshold": config.preprocess.sign_threshold,
            "aggregate_rule": config.preprocess.aggregate_rule,
            "prune_pendants": config.preprocess.prune_pendants,
            "keep_component": config.preprocess.keep_component,
            "balance_mode": config.balance_mode,
            "analyses": sorted(config.analyses),
            "emit": sorted(config.emit),
            "workers": workers,
        },
        "counts": {
            "before": {"nodes": built.n_nodes, "edges": built.n_edges},
            "after": {"nodes": pre.n_nodes, "edges": pre.n_edges},
        },
        "reports": sorted(written),
    }
    _write_json(out_dir / "manifest.json", manifest)
    return EXIT_OK


def compare(config: RunConfig) -> int:
    """Run only the directed-vs-undirected comparison."""
    config.analyses = ("undirected-compare",)
    return run(config)


# -- argument parsing ---------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="input dataset path")
    parser.add_argument("--format", default="tsv-sign", choices=INPUT_FORMATS,
                        help="input format (default tsv-sign)")
    parser.add_argument("--threshold", type=float, default=0.0,
                        help="sign threshold (default 0)")
    parser.add_argument("--aggregate", default="sum",
                        choices=sorted(_AGGREGATE_FLAG),
                        help="aggregation for parallel records (default sum)")
    parser.add_argument("--no-prune-pendants", action="store_true",
                        help="keep degree-1 nodes")
    parser.add_argument("--component", default="giant",
                        choices=("giant", "all"),
                        help="component selection (default giant)")
    parser.add_argument("--out", default="reports", help="output directory")
    parser.add_argument("--emit", default="json,csv",
                        help="comma list of output formats (json,csv)")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes (default: CPU count, capped "
                             "by BALANCE_THREADS)")


def _config_from_args(args: argparse.Namespace,
                      analyses: tuple[str, ...]) -> RunConfig:
    return RunConfig(
        input_path=args.input,
        input_format=args.format,
        preprocess=PreprocessConfig(
            sign_threshold=args.threshold,
            aggregate_rule=_AGGREGATE_FLAG[args.aggregate],
            prune_pendants=not args.no_prune_pendants,
            keep_component=args.component,
        ),
        analyses=analyses,
        balance_mode=getattr(args, "balance_mode", "type-mean"),
        out_dir=args.out,
        emit=tuple(s.strip() for s in args.emit.split(",") if s.strip()),
        workers=args.workers,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triadbalance",
        description="Partial structural balance for signed directed networks")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run selected analyses")
    _add_common(analyze)
    analyze.add_argument("--analyses",
                         default=",".join(ANALYSES),
                         help="comma list from: " + ", ".join(ANALYSES))
    analyze.add_argument("--balance-mode", default="type-mean",
                         choices=balance.BALANCE_MODES, dest="balance_mode")

    census_p = sub.add_parser("census", help="triad census only")
    _add_common(census_p)

    compare_p = sub.add_parser("compare",
                               help="directed vs undirected comparison")
    _add_common(compare_p)

    oracle_p = sub.add_parser("oracle-check",
                              help="compare the fast path against the "
                                   "brute-force reference (debugging)")
    oracle_p.add_argument("--input", help="optional input dataset")
    oracle_p.add_argument("--format", default="tsv-sign",
                          choices=INPUT_FORMATS)
    oracle_p.add_argument("--n", type=int, default=20)
    oracle_p.add_argument("--edge-prob", type=float, default=0.3)
    oracle_p.add_argument("--neg-prob", type=float, default=0.3)
    oracle_p.add_argument("--seed", type=int, default=7)

    gen = sub.add_parser("gen-random", help="write a random signed digraph")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--edge-prob", type=float, required=True)
    gen.add_argument("--neg-prob", type=float, default=0.0)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output TSV path")
    return parser


def _oracle_check(args: argparse.Namespace) -> int:
    from .oracle import ORACLE_MAX_NODES, brute_force, random_signed_digraph

    if args.input:
        records = load_edge_records(args.input, args.format)
        graph = preprocess(build_graph(records))
    else:
        graph = random_signed_digraph(args.n, args.edge_prob, args.neg_prob,
                                      args.seed)
    if graph.n_nodes > ORACLE_MAX_NODES:
        print(f"error: oracle supports at most {ORACLE_MAX_NODES} nodes",
              file=sys.stderr)
        return EXIT_INPUT
    from .crosscheck import compare_with_oracle
    mismatches = compare_with_oracle(graph)
    if mismatches:
        for field_name, fast, slow in mismatches:
            print(f"MISMATCH {field_name}: fast={fast!r} oracle={slow!r}")
        return 1
    print(f"oracle-check OK: n={graph.n_nodes} m={graph.n_edges}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "analyze":
        analyses = tuple(s.strip() for s in args.analyses.split(",") if s.strip())
        config = _config_from_args(args, analyses)
        return run(config)
    if args.command == "census":
        return run(_config_from_args(args, ("census",)))
    if args.command == "compare":
        return run(_config_from_args(args, ("undirected-compare",)))
    if args.command == "oracle-check":
        return _oracle_check(args)
    if args.command == "gen-random":
        graph = oracle.random_signed_digraph(args.n, args.edge_prob,
                                             args.neg_prob, args.seed)
        dump_tsv(graph, args.out)
        print(f"wrote {graph.n_edges} edges over {graph.n_nodes} nodes "
              f"to {args.out}")
        return EXIT_OK
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
