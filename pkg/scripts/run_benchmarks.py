#!/usr/bin/env python3
"""Reproduce the accuracy/robustness headline numbers.

Runs, for every dataset found under the data directory, the 20-trial miss
rate benchmark; then the noisy-sinc regression, the supply/temperature
robustness studies, and (when diabetes/leukemia are present) the
weight-reuse expansion benchmarks.  Writes CSVs into --out and prints each
summary as JSON.
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

from elmchip.catalog import BENCHMARKS, available, load_benchmark
from elmchip.explorer import (
    emit,
    run_benchmark,
    run_expansion_benchmark,
    run_regression,
    run_robustness,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--data-dir", default=None)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name in BENCHMARKS:
        if not available(name, args.data_dir):
            print(f"{name}: unavailable, skipping")
            continue
        ds = load_benchmark(name, root=args.data_dir, seed=args.seed)
        rep = run_benchmark(ds, trials=args.trials, seed=args.seed)
        emit(rep, out / f"bench_{name}.csv")
        print(f"{name}: {json.dumps(rep.summary)}")

    rep = run_regression(seed=args.seed)
    emit(rep, out / "regress_sinc.csv")
    print(f"sinc: {json.dumps(rep.summary)}")

    for mode in ("vdd", "temperature"):
        rep = run_robustness(mode, seed=args.seed)
        emit(rep, out / f"robust_{mode}.csv")
        print(f"robust {mode}: {json.dumps(rep.summary)}")

    if available("diabetes", args.data_dir):
        ds = load_benchmark("diabetes", root=args.data_dir, seed=args.seed)
        rep = run_expansion_benchmark(ds, trials=args.trials, seed=args.seed)
        emit(rep, out / "expand_diabetes.csv")
        print(f"expand diabetes: {json.dumps(rep.summary)}")
    if available("leukemia", args.data_dir):
        ds = load_benchmark("leukemia", root=args.data_dir, seed=args.seed)
        rep = run_expansion_benchmark(
            ds, physical_k=128, physical_n=128, trials=args.trials, seed=args.seed
        )
        emit(rep, out / "expand_leukemia.csv")
        print(f"expand leukemia: {json.dumps(rep.summary)}")
    print(f"results in {out.resolve()}")


if __name__ == "__main__":
    main()
