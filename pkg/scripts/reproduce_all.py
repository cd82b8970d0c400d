#!/usr/bin/env python3
"""Regenerate every tabulated result as CSV files in one directory."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from symfid.cli import main as symfid

JOBS = [
    ("table1", []),
    ("limits", []),
    ("fig1", ["--n-max", "100"]),
    ("ce-sweep", ["--n", "4", "--k", "2", "--points", "13"]),
    ("inverse", ["--n", "4", "--k", "2"]),
    ("lu-check", ["--n", "4", "--trials", "20"]),
]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--quick", action="store_true", help="fig1 up to N = 20 only")
    args = ap.parse_args(argv)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for command, extra in JOBS:
        if args.quick and command == "fig1":
            extra = ["--n-max", "20"]
        path = out / f"{command}.csv"
        start = time.perf_counter()
        code = symfid([command, *extra, "--seed", str(args.seed), "--out", str(path)])
        print(f"{command:10s} -> {path} [{time.perf_counter() - start:.1f} s] exit {code}")
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
