"""Registry of the benchmark datasets and where to find them on disk.

The files are not redistributed with this package; point ELMCHIP_DATA_DIR
at a directory containing them (see scripts/fetch_datasets.py).
"""
from __future__ import annotations

import os
from pathlib import Path

from .data import Dataset, load_dense_csv, load_sparse
from .errors import DataError

DATA_DIR_ENV = "ELMCHIP_DATA_DIR"

# name -> (files, feature dim, train size) for the reference splits
BENCHMARKS = {
    "diabetes": {"files": ["diabetes"], "d": 8, "train_n": 512},
    "australian": {"files": ["australian"], "d": 14, "train_n": 460},
    "brightdata": {"files": ["brightdata.csv"], "d": 14, "train_n": 1000},
    "adult": {"files": ["a4a", "a4a.t"], "d": 123, "train_n": 4781},
    "leukemia": {"files": ["leu", "leu.t"], "d": 7129, "train_n": 38},
}


def data_root(root=None) -> Path:
    if root is not None:
        return Path(root)
    env = os.environ.get(DATA_DIR_ENV)
    if not env:
        raise DataError(
            f"no dataset root: pass --data-dir or set {DATA_DIR_ENV} "
            "(see scripts/fetch_datasets.py)"
        )
    return Path(env)


def available(name: str, root=None) -> bool:
    try:
        base = data_root(root)
    except DataError:
        return False
    spec = BENCHMARKS.get(name)
    return spec is not None and all((base / f).exists() for f in spec["files"])


def load_benchmark(name: str, root=None, seed: int = 0) -> Dataset:
    """Load one of the reference binary classification datasets."""
    if name not in BENCHMARKS:
        raise DataError(f"unknown dataset {name!r}; known: {sorted(BENCHMARKS)}")
    base = data_root(root)
    spec = BENCHMARKS[name]
    missing = [str(base / f) for f in spec["files"] if not (base / f).exists()]
    if missing:
        raise DataError(f"dataset {name!r} missing files: {', '.join(missing)}")
    if name == "brightdata":
        return load_dense_csv(
            base / "brightdata.csv", name=name, train_n=spec["train_n"], seed=seed
        )
    if name in ("adult", "leukemia"):
        return load_sparse(
            base / spec["files"][0],
            test_path=base / spec["files"][1],
            n_features=spec["d"],
            name=name,
        )
    return load_sparse(
        base / spec["files"][0], n_features=spec["d"], name=name,
        train_n=spec["train_n"], seed=seed,
    )
