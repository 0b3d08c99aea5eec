#!/usr/bin/env python3
"""Download the benchmark datasets into a local directory.

Usage:
    python scripts/fetch_datasets.py [--dest DIR]

Then point the ELMCHIP_DATA_DIR environment variable (or --data-dir) at DIR.

Four of the five datasets come from the LIBSVM binary-classification
collection and are fetched directly.  The fifth ("brightdata", a bright-field
cell-sorting dataset) is not publicly redistributed; if you have a copy,
place it at DIR/brightdata.csv as a dense CSV with 14 feature columns
followed by a +/-1 label column.  Experiments that need a missing dataset
skip with a clear message instead of failing.
"""
from __future__ import annotations

import argparse
import bz2
import sys
import urllib.request
from pathlib import Path

BASE = "https://www.csie.ntu.edu.tw/~cjlin/libsvmtools/datasets/binary"

FILES = {
    "diabetes": f"{BASE}/diabetes",
    "australian": f"{BASE}/australian",
    "a4a": f"{BASE}/a4a",
    "a4a.t": f"{BASE}/a4a.t",
    "leu": f"{BASE}/leu.bz2",
    "leu.t": f"{BASE}/leu.t.bz2",
}


def fetch(url: str, dest: Path) -> None:
    print(f"  {url} -> {dest}")
    with urllib.request.urlopen(url, timeout=60) as resp:
        payload = resp.read()
    if url.endswith(".bz2"):
        payload = bz2.decompress(payload)
    dest.write_bytes(payload)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dest", default="data", help="destination directory (default ./data)")
    args = ap.parse_args()
    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    failures = []
    for name, url in FILES.items():
        target = dest / name
        if target.exists():
            print(f"  {target} already present, skipping")
            continue
        try:
            fetch(url, target)
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures.append(name)
            print(f"  FAILED {name}: {exc}", file=sys.stderr)
    if not (dest / "brightdata.csv").exists():
        print(
            "note: brightdata.csv is not publicly available; place your copy at "
            f"{dest / 'brightdata.csv'} if you have one"
        )
    if failures:
        print(f"failed: {', '.join(failures)}", file=sys.stderr)
        return 1
    print(f"done; set ELMCHIP_DATA_DIR={dest.resolve()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
