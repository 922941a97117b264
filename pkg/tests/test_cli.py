import csv
import json
import subprocess
import sys
from math import comb
from pathlib import Path

import pytest

from triadbalance import load_tsv
from triadbalance.census import resolve_workers
from triadbalance.cli import main

TRIANGLE_TSV = """\
a\tb\t+1
b\tc\t+1
a\tc\t-1
b\ta\t+1
c\tb\t+1
c\ta\t-1
"""

CYCLE_ONLY_TSV = """\
a\tb\t+1
b\tc\t+1
c\ta\t+1
"""

# directed 3-cycle {a,b,c} plus a transitive triad {c,d,e}
CYCLE_PLUS_030T_TSV = """\
a\tb\t+1
b\tc\t+1
c\ta\t+1
c\td\t+1
d\te\t+1
c\te\t+1
"""

# mismatched reciprocal pair {u,v} attached to a transitive triad {v,x,y}
MISMATCH_TSV = """\
u\tv\t+1
v\tu\t-1
v\tx\t+1
x\ty\t+1
v\ty\t+1
"""


def _write(tmp_path: Path, name: str, text: str) -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_analyze_end_to_end(tmp_path):
    data = _write(tmp_path, "g.tsv", TRIANGLE_TSV)
    out = tmp_path / "out"
    rc = main(["analyze", "--input", str(data), "--out", str(out)])
    assert rc == 0
    for name in ("manifest.json", "graph.tsv", "balance.json", "balance.csv",
                 "census.csv", "composition.csv", "metrics.json",
                 "compare.json"):
        assert (out / name).exists(), name
    doc = json.loads((out / "balance.json").read_text())
    assert doc["overall_type_mean"] == 0.0  # lone 300 triad, one neg pair
    assert doc["undirected"]["triangles"] == 1


def test_census_subcommand(tmp_path):
    data = _write(tmp_path, "g.tsv", TRIANGLE_TSV)
    out = tmp_path / "out"
    rc = main(["census", "--input", str(data), "--out", str(out)])
    assert rc == 0
    with open(out / "census.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["triad_type", "count"]
    assert len(rows) == 17
    assert sum(int(r[1]) for r in rows[1:]) == comb(3, 3)


def test_missing_input_exits_2(tmp_path):
    rc = main(["analyze", "--input", str(tmp_path / "nope.tsv"),
               "--out", str(tmp_path / "out")])
    assert rc == 2


def test_malformed_input_exits_2(tmp_path):
    data = _write(tmp_path, "bad.tsv", "a\tb\n")
    rc = main(["analyze", "--input", str(data), "--out", str(tmp_path / "out")])
    assert rc == 2


def test_zero_transitive_triads_exits_3(tmp_path):
    data = _write(tmp_path, "cycle.tsv", CYCLE_ONLY_TSV)
    rc = main(["analyze", "--input", str(data), "--analyses", "balance",
               "--out", str(tmp_path / "out")])
    assert rc == 3


def test_census_of_cycle_still_works(tmp_path):
    data = _write(tmp_path, "cycle.tsv", CYCLE_ONLY_TSV)
    rc = main(["census", "--input", str(data), "--out", str(tmp_path / "out")])
    assert rc == 0


def test_compare_cancellation_list(tmp_path):
    data = _write(tmp_path, "mismatch.tsv", MISMATCH_TSV)
    out = tmp_path / "out"
    rc = main(["compare", "--input", str(data), "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "compare.json").read_text())
    assert ["u", "v"] in doc["cancelled_edges"]
    assert doc["identical_realizations"] is False


def test_compare_reports_undirected_only_triangle(tmp_path):
    data = _write(tmp_path, "cycle_plus.tsv", CYCLE_PLUS_030T_TSV)
    out = tmp_path / "out"
    rc = main(["compare", "--input", str(data), "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "compare.json").read_text())
    assert ["a", "b", "c"] in doc["undirected_only_triangles"]
    assert doc["undirected"]["triangles"] == 2
    assert doc["directed_nonpartial"]["balanced"] == 1
    with open(out / "compare.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "partial_br"
    assert len(rows) == 2


def test_reports_are_deterministic(tmp_path):
    data = _write(tmp_path, "g.tsv", TRIANGLE_TSV)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["analyze", "--input", str(data), "--out", str(out1)]) == 0
    assert main(["analyze", "--input", str(data), "--out", str(out2)]) == 0
    for path1 in sorted(out1.iterdir()):
        path2 = out2 / path1.name
        if path1.name == "manifest.json":
            m1 = json.loads(path1.read_text())
            m2 = json.loads(path2.read_text())
            m1.pop("created")
            m2.pop("created")
            assert m1 == m2
        else:
            assert path1.read_bytes() == path2.read_bytes(), path1.name


def test_manifest_counts_match_dump(tmp_path):
    data = _write(tmp_path, "g.tsv", TRIANGLE_TSV)
    out = tmp_path / "out"
    assert main(["analyze", "--input", str(data), "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    reloaded = load_tsv(out / "graph.tsv")
    assert manifest["counts"]["after"]["nodes"] == reloaded.n_nodes
    assert manifest["counts"]["after"]["edges"] == reloaded.n_edges


def test_gen_random_then_analyze(tmp_path):
    data = tmp_path / "rand.tsv"
    rc = main(["gen-random", "--n", "40", "--edge-prob", "0.2",
               "--neg-prob", "0.3", "--seed", "11", "--out", str(data)])
    assert rc == 0
    rc = main(["analyze", "--input", str(data),
               "--analyses", "balance,census",
               "--out", str(tmp_path / "out")])
    assert rc == 0


def test_oracle_check_subcommand(capsys):
    rc = main(["oracle-check", "--n", "12", "--edge-prob", "0.3",
               "--neg-prob", "0.4", "--seed", "3"])
    assert rc == 0
    assert "oracle-check OK" in capsys.readouterr().out


def test_matrix_format_via_cli(tmp_path):
    data = _write(tmp_path, "m.txt", "0 1 1\n1 0 1\n1 1 0\n")
    out = tmp_path / "out"
    rc = main(["analyze", "--input", str(data), "--format", "signed-matrix",
               "--analyses", "balance", "--out", str(out)])
    assert rc == 0
    doc = json.loads((out / "balance.json").read_text())
    assert doc["overall_type_mean"] == 1.0


def test_console_entry_point(tmp_path):
    data = _write(tmp_path, "g.tsv", TRIANGLE_TSV)
    proc = subprocess.run(
        [sys.executable, "-m", "triadbalance.cli", "analyze",
         "--input", str(data), "--analyses", "census",
         "--out", str(tmp_path / "out")],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_unwritable_out_dir_exits_2(tmp_path):
    data = _write(tmp_path, "g.tsv", TRIANGLE_TSV)
    blocker = _write(tmp_path, "not-a-dir", "")
    rc = main(["analyze", "--input", str(data), "--out", str(blocker)])
    assert rc == 2


def test_balance_threads_env_cap(monkeypatch):
    monkeypatch.setenv("BALANCE_THREADS", "1")
    assert resolve_workers(8) == 1
    monkeypatch.setenv("BALANCE_THREADS", "3")
    assert resolve_workers(8) == 3
    monkeypatch.delenv("BALANCE_THREADS")
    assert resolve_workers(8) == 8
