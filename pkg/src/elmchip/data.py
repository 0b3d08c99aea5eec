"""Dataset ingestion, feature scaling, splits and synthetic task generation."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError, SplitError

SINC_DOMAIN_SCALE = 3.0 * math.pi  # lobes of the regression target over [-1, 1]


@dataclass(frozen=True)
class Dataset:
    """Labeled samples with features scaled to [-1, 1] and a train/test split.

    Scaling is min-max, fit on the training rows only; test rows may land
    slightly outside [-1, 1] and are clamped downstream.  Classification
    targets are coded -1/+1.
    """

    name: str
    features: np.ndarray
    targets: np.ndarray
    train_idx: np.ndarray
    test_idx: np.ndarray
    task: str  # "classification" or "regression"
    col_min: np.ndarray
    col_max: np.ndarray
    clean_targets: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for arr in (self.features, self.targets, self.train_idx, self.test_idx):
            np.asarray(arr).setflags(write=False)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def train_features(self) -> np.ndarray:
        return self.features[self.train_idx]

    @property
    def train_targets(self) -> np.ndarray:
        return self.targets[self.train_idx]

    @property
    def test_features(self) -> np.ndarray:
        return self.features[self.test_idx]

    @property
    def test_targets(self) -> np.ndarray:
        return self.targets[self.test_idx]

    def save_metadata(self, path) -> None:
        """JSON sidecar with scaling parameters and split indices for exact replay."""
        doc = {
            "name": self.name,
            "task": self.task,
            "col_min": list(self.col_min),
            "col_max": list(self.col_max),
            "train_idx": [int(i) for i in self.train_idx],
            "test_idx": [int(i) for i in self.test_idx],
            "metadata": self.metadata,
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)


def _scale_columns(raw: np.ndarray, train_idx: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    col_min = raw[train_idx].min(axis=0)
    col_max = raw[train_idx].max(axis=0)
    span = col_max - col_min
    scaled = np.zeros_like(raw, dtype=float)
    live = span > 0
    scaled[:, live] = 2.0 * (raw[:, live] - col_min[live]) / span[live] - 1.0
    # constant columns carry no information and map to 0
    return scaled, col_min, col_max


def unscale(dataset: Dataset, scaled: np.ndarray) -> np.ndarray:
    """Invert the min-max scaling on non-constant columns."""
    span = dataset.col_max - dataset.col_min
    out = np.array(scaled, dtype=float)
    live = span > 0
    out[:, live] = (scaled[:, live] + 1.0) / 2.0 * span[live] + dataset.col_min[live]
    out[:, ~live] = dataset.col_min[~live]
    return out


def _check_finite(raw: np.ndarray, path) -> None:
    bad = ~np.isfinite(raw)
    if bad.any():
        row = int(np.argwhere(bad)[0][0])
        raise DataError(f"{path}: non-finite feature value at row {row + 1}")


def _encode_labels(labels: np.ndarray, path) -> np.ndarray:
    values = np.unique(labels)
    if len(values) != 2:
        raise DataError(f"{path}: expected two classes, found {len(values)}")
    return np.where(labels == values[0], -1.0, 1.0)


def _finish(
    name: str,
    raw: np.ndarray,
    targets: np.ndarray,
    train_idx: np.ndarray,
    test_idx: np.ndarray,
    task: str,
    path,
    metadata: dict | None = None,
) -> Dataset:
    _check_finite(raw, path)
    scaled, col_min, col_max = _scale_columns(raw, train_idx)
    return Dataset(
        name=name,
        features=scaled,
        targets=targets,
        train_idx=np.asarray(train_idx, dtype=np.int64),
        test_idx=np.asarray(test_idx, dtype=np.int64),
        task=task,
        col_min=col_min,
        col_max=col_max,
        metadata=metadata or {},
    )


def load_dense_csv(
    path,
    *,
    test_path=None,
    name: str | None = None,
    has_header: bool = False,
    train_n: int | None = None,
    seed: int = 0,
) -> Dataset:
    """Rectangular numeric CSV with the label in the last column.

    Labels with two distinct values are remapped to -1/+1.  With test_path
    the two files become the train/test split directly; otherwise train_n
    (or everything) selects training rows.
    """
    table = _parse_dense(path, has_header)
    if test_path is not None:
        test_table = _parse_dense(test_path, has_header)
        if test_table.shape[1] != table.shape[1]:
            raise DataError(f"{test_path}: column count differs from {path}")
        train_idx = np.arange(len(table))
        test_idx = np.arange(len(table), len(table) + len(test_table))
        table = np.vstack([table, test_table])
    else:
        train_idx = test_idx = None
    raw, labels = table[:, :-1], table[:, -1]
    targets = _encode_labels(labels, path)
    if train_idx is None:
        train_idx, test_idx = _indices(len(raw), train_n, targets, "classification", seed)
    return _finish(name or str(path), raw, targets, train_idx, test_idx, "classification", path)


def _parse_dense(path, has_header: bool) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, cells in enumerate(reader, start=1):
            if lineno == 1 and has_header:
                continue
            if not cells:
                continue
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise DataError(f"{path}: non-numeric cell at row {lineno}: {exc}") from None
            if len(rows) > 1 and len(rows[-1]) != len(rows[0]):
                raise DataError(
                    f"{path}: ragged row {lineno}: {len(rows[-1])} cells, expected {len(rows[0])}"
                )
    if not rows:
        raise DataError(f"{path}: empty file")
    return np.asarray(rows, dtype=float)


def load_sparse(
    path,
    *,
    test_path=None,
    n_features: int | None = None,
    name: str | None = None,
    train_n: int | None = None,
    seed: int = 0,
) -> Dataset:
    """Sparse 'label index:value' text format with 1-based indices.

    With test_path the two files become the train/test split directly;
    otherwise train_n (or everything) selects training rows.
    """
    raw_a, lab_a = _parse_sparse(path, n_features)
    if test_path is not None:
        raw_b, lab_b = _parse_sparse(test_path, n_features)
        width = max(raw_a.shape[1], raw_b.shape[1]) if n_features is None else n_features
        raw = np.zeros((len(raw_a) + len(raw_b), width))
        raw[: len(raw_a), : raw_a.shape[1]] = raw_a
        raw[len(raw_a) :, : raw_b.shape[1]] = raw_b
        labels = np.concatenate([lab_a, lab_b])
        train_idx = np.arange(len(raw_a))
        test_idx = np.arange(len(raw_a), len(raw))
    else:
        raw, labels = raw_a, lab_a
        train_idx, test_idx = None, None
    targets = _encode_labels(labels, path)
    if train_idx is None:
        train_idx, test_idx = _indices(len(raw), train_n, targets, "classification", seed)
    return _finish(name or str(path), raw, targets, train_idx, test_idx, "classification", path)


def _parse_sparse(path, n_features: int | None) -> tuple[np.ndarray, np.ndarray]:
    labels = []
    entries = []  # per-row dict of 0-based index -> value
    width = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                labels.append(0.0)
                entries.append({})
                continue
            try:
                labels.append(float(tokens[0]))
            except ValueError:
                raise DataError(f"{path}: bad label at row {lineno}: {tokens[0]!r}") from None
            row = {}
            for tok in tokens[1:]:
                try:
                    idx_s, val_s = tok.split(":", 1)
                    idx, val = int(idx_s), float(val_s)
                except ValueError:
                    raise DataError(f"{path}: bad index:value pair at row {lineno}: {tok!r}") from None
                if idx < 1:
                    raise DataError(f"{path}: indices are 1-based, got {idx} at row {lineno}")
                if n_features is not None and idx > n_features:
                    raise DataError(
                        f"{path}: index {idx} exceeds declared dimension {n_features} at row {lineno}"
                    )
                row[idx - 1] = val
                width = max(width, idx)
            entries.append(row)
    if not labels:
        raise DataError(f"{path}: empty file")
    width = n_features if n_features is not None else width
    raw = np.zeros((len(labels), width))
    for r, row in enumerate(entries):
        for c, v in row.items():
            raw[r, c] = v
    return raw, np.asarray(labels)


def _indices(n, train_n, targets, task, seed):
    if train_n is None:
        return np.arange(n), np.arange(0)
    return _split_indices(n, train_n, targets, task, seed)


def generate_sinc(
    n: int,
    noise_sigma: float,
    seed: int = 0,
    *,
    train_n: int | None = None,
    domain_scale: float = SINC_DOMAIN_SCALE,
) -> Dataset:
    """Noisy samples of sin(a*x)/(a*x) on x in [-1, 1]; deterministic per seed."""
    if n < 1:
        raise DataError(f"need n >= 1 samples, got {n!r}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(-1.0, 1.0, size=n)
    clean = np.sinc(domain_scale * x / math.pi)
    noisy = clean + rng.normal(0.0, noise_sigma, size=n)
    if train_n is None:
        train_idx, test_idx = np.arange(n), np.arange(0)
    else:
        train_idx, test_idx = _split_indices(n, train_n, noisy, "regression", seed)
    return Dataset(
        name="sinc",
        features=x[:, None],
        targets=noisy,
        train_idx=train_idx,
        test_idx=test_idx,
        task="regression",
        col_min=np.array([-1.0]),
        col_max=np.array([1.0]),
        clean_targets=clean,
        metadata={"noise_sigma": noise_sigma, "seed": seed, "domain_scale": domain_scale},
    )


def sinc_clean(x: np.ndarray, domain_scale: float = SINC_DOMAIN_SCALE) -> np.ndarray:
    """Noise-free regression target for arbitrary probe points."""
    return np.sinc(domain_scale * np.asarray(x, dtype=float) / math.pi)


def _split_indices(n, train_n, targets, task, seed):
    if not 0 < train_n < n:
        raise SplitError(f"train_n must be in 1..{n - 1}, got {train_n!r}")
    rng = np.random.default_rng(seed)
    if task == "classification":
        frac = train_n / n
        train_parts = []
        for cls in np.unique(targets):
            members = np.flatnonzero(targets == cls)
            take = int(round(frac * len(members)))
            take = min(max(take, 1), len(members) - 1) if len(members) > 1 else take
            train_parts.append(rng.permutation(members)[:take])
        train_idx = np.concatenate(train_parts)
        # trim or top up to hit train_n exactly while keeping per-class balance
        if len(train_idx) != train_n:
            rest = np.setdiff1d(np.arange(n), train_idx)
            if len(train_idx) > train_n:
                train_idx = rng.permutation(train_idx)[:train_n]
            else:
                train_idx = np.concatenate(
                    [train_idx, rng.permutation(rest)[: train_n - len(train_idx)]]
                )
        train_idx = np.sort(train_idx)
        test_idx = np.setdiff1d(np.arange(n), train_idx)
        for cls in np.unique(targets):
            if not (targets[train_idx] == cls).any() or not (targets[test_idx] == cls).any():
                raise SplitError(f"class {cls} missing from one side of the split")
    else:
        order = rng.permutation(n)
        train_idx = np.sort(order[:train_n])
        test_idx = np.sort(order[train_n:])
    return train_idx, test_idx


def split(dataset: Dataset, train_n: int, seed: int = 0) -> Dataset:
    """Deterministic shuffled re-split, stratified by class for classification."""
    train_idx, test_idx = _split_indices(
        dataset.n_samples, train_n, dataset.targets, dataset.task, seed
    )
    # rescale against the new training rows only
    if dataset.task == "classification" or dataset.clean_targets is None:
        raw = unscale(dataset, dataset.features)
        scaled, col_min, col_max = _scale_columns(raw, train_idx)
    else:
        scaled, col_min, col_max = dataset.features, dataset.col_min, dataset.col_max
    return replace(
        dataset,
        features=scaled,
        train_idx=train_idx,
        test_idx=test_idx,
        col_min=col_min,
        col_max=col_max,
        metadata={**dataset.metadata, "split_seed": seed, "train_n": train_n},
    )
