#!/usr/bin/env python3
"""Download the public signed-rating datasets used by the acceptance suite.

The toolkit itself never touches the network; this helper fetches the two
trader-rating networks (CSV rows: source,target,rating,timestamp) into
data/bitcoin/ so that the rating-network acceptance tests stop skipping.

Usage:
    python3 scripts/fetch_datasets.py [--dest data/bitcoin]
"""
import argparse
import gzip
import hashlib
import sys
import urllib.request
from pathlib import Path

DATASETS = {
    "soc-sign-bitcoinotc.csv": "https://snap.stanford.edu/data/soc-sign-bitcoinotc.csv.gz",
    "soc-sign-bitcoinalpha.csv": "https://snap.stanford.edu/data/soc-sign-bitcoinalpha.csv.gz",
}


def fetch(url: str, dest: Path) -> None:
    print(f"downloading {url}")
    with urllib.request.urlopen(url, timeout=120) as resp:
        payload = resp.read()
    data = gzip.decompress(payload)
    dest.write_bytes(data)
    digest = hashlib.sha256(data).hexdigest()
    print(f"  wrote {dest} ({len(data)} bytes, sha256 {digest[:16]}...)")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data/bitcoin",
                        help="target directory (default data/bitcoin)")
    args = parser.parse_args()
    dest_dir = Path(args.dest)
    dest_dir.mkdir(parents=True, exist_ok=True)
    for name, url in DATASETS.items():
        target = dest_dir / name
        if target.exists():
            print(f"already present: {target}")
            continue
        try:
            fetch(url, target)
        except OSError as exc:
            print(f"failed to fetch {name}: {exc}", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
