#!/usr/bin/env python3
"""Reproduce the design-space sweep figures (plot-ready CSV output).

Runs the saturation-ratio, output-weight-resolution, counter-resolution and
conversion-energy sweeps and writes one CSV per sweep into --out (default
./results).  The two resolution sweeps need the brightdata dataset; they are
skipped with a message when it is unavailable.
"""
from __future__ import annotations

import argparse
import json
from pathlib import Path

from elmchip.catalog import available, load_benchmark
from elmchip.explorer import emit, sweep_beta_bits, sweep_counter_bits, sweep_energy, sweep_ratio


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--data-dir", default=None)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    print("ratio sweep (L_min vs saturation ratio) ...")
    rep = sweep_ratio(trials=min(args.trials, 10), seed=args.seed)
    emit(rep, out / "sweep_ratio.csv")
    print(json.dumps(rep.summary, indent=2))

    print("energy sweep (E_c vs full-scale current) ...")
    rep = sweep_energy()
    emit(rep, out / "sweep_energy.csv")
    print(json.dumps(rep.summary, indent=2))

    if available("brightdata", args.data_dir):
        ds = load_benchmark("brightdata", root=args.data_dir, seed=args.seed)
        print("output-weight resolution sweep ...")
        rep = sweep_beta_bits(ds, trials=args.trials, seed=args.seed)
        emit(rep, out / "sweep_beta_bits.csv")
        print(json.dumps(rep.summary, indent=2))
        print("counter resolution sweep ...")
        rep = sweep_counter_bits(ds, trials=args.trials, seed=args.seed)
        emit(rep, out / "sweep_counter_bits.csv")
        print(json.dumps(rep.summary, indent=2))
    else:
        print("brightdata unavailable; skipping the two resolution sweeps")
    print(f"results in {out.resolve()}")


if __name__ == "__main__":
    main()
