"""Command-line harness for the design-space exploration experiments.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 model-domain
error.  Reports are emitted as CSV (default) or JSON; CSV columns match the
report's `columns` tuple documented per subcommand below.
"""
from __future__ import annotations

import argparse
import json
import sys

from .catalog import DATA_DIR_ENV, load_benchmark
from .errors import ConfigError, DataError, ModelDomainError
from .explorer import (
    SweepReport,
    emit,
    run_benchmark,
    run_expansion_benchmark,
    run_regression,
    run_robustness,
    sweep_beta_bits,
    sweep_counter_bits,
    sweep_energy,
    sweep_ratio,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_MODEL = 4


def _load_overrides(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return doc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="elmchip",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="JSON", help="chip/experiment overrides (JSON object)")
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--trials", type=int, default=None, help="trials per grid point")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument(
        "--data-dir", default=None, help=f"dataset root (default ${DATA_DIR_ENV})"
    )
    sub = p.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="parameter sweeps").add_subparsers(
        dest="target", required=True
    )
    sweep.add_parser(
        "ratio", parents=[common],
        help="minimum hidden count vs saturation ratio; columns sigma_vt,ratio,l_min,error_at_l_min",
    )
    for name, hlp in (
        ("beta-bits", "error vs output-weight bits; columns bits,mean_error,std_error"),
        ("counter-bits", "error vs counter bits; columns b,mean_error,std_error"),
    ):
        sp = sweep.add_parser(name, parents=[common], help=hlp)
        sp.add_argument("--dataset", default="brightdata")
    sweep.add_parser(
        "energy", parents=[common],
        help="conversion energy vs full-scale current; columns vdd,i_z_max,e_c,t_neu",
    )

    bench = sub.add_parser("bench", parents=[common], help="benchmark miss rate (mean±std)")
    bench.add_argument("dataset")

    reg = sub.add_parser("regress", help="regression benchmarks").add_subparsers(
        dest="target", required=True
    )
    reg.add_parser(
        "sinc", parents=[common],
        help="noisy sinc regression; columns x,prediction,clean,noisy",
    )

    rob = sub.add_parser("robust", help="variation robustness").add_subparsers(
        dest="target", required=True
    )
    for name in ("vdd", "temp"):
        rob.add_parser(
            name, parents=[common],
            help=f"{name} variation; columns point,max_dev_raw,max_dev_norm,rms_raw,rms_norm",
        )

    exp = sub.add_parser("expand", help="weight-reuse demos").add_subparsers(
        dest="target", required=True
    )
    ed = exp.add_parser(
        "demo", parents=[common],
        help="physical vs virtually expanded layer; columns trial,seed,miss_physical,miss_virtual",
    )
    ed.add_argument("--dataset", default="diabetes")
    return p


def _emit(report: SweepReport, args) -> None:
    if args.out:
        emit(report, args.out, args.format)
    elif args.format == "json":
        from dataclasses import asdict

        json.dump(asdict(report), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        import csv as _csv

        w = _csv.writer(sys.stdout)
        w.writerow(report.columns)
        for row in report.rows:
            w.writerow([row.get(c) for c in report.columns])
    print(f"# summary: {json.dumps(report.summary, sort_keys=True)}", file=sys.stderr)


def _dispatch(args, overrides: dict) -> SweepReport:
    seed = args.seed
    if args.command == "sweep":
        if args.target == "ratio":
            kw = dict(seed=seed, **overrides)
            if args.trials:
                kw["trials"] = args.trials
            return sweep_ratio(**kw)
        if args.target in ("beta-bits", "counter-bits"):
            ds = load_benchmark(args.dataset, root=args.data_dir, seed=seed)
            kw = dict(seed=seed, **overrides)
            if args.trials:
                kw["trials"] = args.trials
            fn = sweep_beta_bits if args.target == "beta-bits" else sweep_counter_bits
            return fn(ds, **kw)
        if args.target == "energy":
            return sweep_energy(**overrides)
    if args.command == "bench":
        ds = load_benchmark(args.dataset, root=args.data_dir, seed=seed)
        kw = dict(seed=seed, **overrides)
        if args.trials:
            kw["trials"] = args.trials
        return run_benchmark(ds, **kw)
    if args.command == "regress":
        return run_regression(seed=seed, **overrides)
    if args.command == "robust":
        mode = "vdd" if args.target == "vdd" else "temperature"
        return run_robustness(mode, seed=seed, **overrides)
    if args.command == "expand":
        ds = load_benchmark(args.dataset, root=args.data_dir, seed=seed)
        kw = dict(seed=seed, **overrides)
        if args.trials:
            kw["trials"] = args.trials
        if args.dataset == "leukemia":
            kw.setdefault("physical_k", 128)
            kw.setdefault("physical_n", 128)
        return run_expansion_benchmark(ds, **kw)
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _load_overrides(args.config)
        report = _dispatch(args, overrides)
        _emit(report, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except TypeError as exc:
        # bad override name reaching a keyword-only signature
        print(f"error: invalid configuration override: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
