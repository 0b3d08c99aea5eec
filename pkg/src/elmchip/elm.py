"""Second-stage ELM machinery.

Hidden-matrix assembly, ridge/pseudoinverse training, output-weight
quantization, prediction, the binary decision rule, and common-mode
hidden-layer normalization.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .chip import ChipConfig, WeightMatrix, input_currents, map_input, neuron_counts
from .errors import (
    ConfigError,
    EvaluationError,
    NormalizationWarning,
    ShapeError,
    SingularMatrixError,
)

DEFAULT_RIDGE_GRID = tuple(2.0**p for p in range(-10, 11))


@dataclass(frozen=True)
class HiddenMatrix:
    """N x L matrix of counter outputs (or normalized reals)."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 2:
            raise ShapeError(f"hidden matrix must be 2-D, got shape {self.values.shape}")
        self.values.setflags(write=False)

    @property
    def n_samples(self) -> int:
        return self.values.shape[0]

    @property
    def n_neurons(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class OutputWeights:
    """Trained output weights with optional fixed-point metadata."""

    beta: np.ndarray
    quant_bits: int | None = None
    quant_scale: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float))
        self.beta.setflags(write=False)

    def to_dict(self) -> dict:
        return {
            "beta": [repr(float(v)) for v in np.asarray(self.beta, dtype=float)],
            "quant_bits": self.quant_bits,
            "quant_scale": None if self.quant_scale is None else repr(float(self.quant_scale)),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "OutputWeights":
        return cls(
            beta=np.array([float(v) for v in doc["beta"]]),
            quant_bits=doc["quant_bits"],
            quant_scale=None if doc["quant_scale"] is None else float(doc["quant_scale"]),
        )


@dataclass(frozen=True)
class RidgeSpec:
    """Ridge hyperparameter: I/C is added to the Gram diagonal."""

    c: float = 2.0**10
    grid: tuple[float, ...] = DEFAULT_RIDGE_GRID
    folds: int = 5

    def __post_init__(self):
        if not self.c > 0:
            raise ConfigError(f"ridge constant c must be positive, got {self.c!r}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds!r}")
        if any(c <= 0 for c in self.grid):
            raise ConfigError("ridge grid values must all be positive")


def build_hidden_matrix(
    features: np.ndarray, weights: WeightMatrix, cfg: ChipConfig
) -> HiddenMatrix:
    """Pass every sample through the chip model; row k equals forward(x_k)."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != cfg.d:
        raise ShapeError(f"expected N x {cfg.d} feature matrix, got shape {features.shape}")
    codes = map_input(features, cfg)
    i_z = input_currents(codes, cfg) @ weights.entries
    return HiddenMatrix(neuron_counts(i_z, cfg).astype(float))


def _as_matrix(h) -> np.ndarray:
    return h.values if isinstance(h, HiddenMatrix) else np.asarray(h, dtype=float)


def train_output_weights(h, t: np.ndarray, spec: RidgeSpec | float) -> OutputWeights:
    """Ridge solution of min ||H beta - T||^2 + (1/C)||beta||^2.

    Uses the (H^T H) Gram form when N >= L and the (H H^T) form otherwise.
    Cholesky on the regularized Gram matrix, SVD fallback on failure.
    """
    hm = _as_matrix(h)
    t = np.asarray(t, dtype=float)
    if hm.shape[0] != t.shape[0]:
        raise ShapeError(f"{hm.shape[0]} hidden rows but {t.shape[0]} targets")
    if not np.any(hm):
        raise SingularMatrixError("hidden matrix H is identically zero")
    c = spec.c if isinstance(spec, RidgeSpec) else float(spec)
    n, l = hm.shape
    if n >= l:
        gram = hm.T @ hm + np.eye(l) / c
        rhs = hm.T @ t
        beta = _spd_solve(gram, rhs, "H^T H + I/C")
    else:
        gram = hm @ hm.T + np.eye(n) / c
        beta = hm.T @ _spd_solve(gram, t, "H H^T + I/C")
    return OutputWeights(beta=beta)


def _spd_solve(gram: np.ndarray, rhs: np.ndarray, label: str) -> np.ndarray:
    try:
        factor = scipy.linalg.cho_factor(gram)
        return scipy.linalg.cho_solve(factor, rhs)
    except scipy.linalg.LinAlgError:
        sol, _, rank, _ = np.linalg.lstsq(gram, rhs, rcond=None)
        if rank == 0:
            raise SingularMatrixError(f"degenerate Gram matrix {label}") from None
        return sol


def cross_validate_ridge(h, t: np.ndarray, spec: RidgeSpec, seed: int = 0) -> float:
    """Pick the grid value with lowest mean k-fold validation MSE.

    Ties (within 1e-9 relative) break toward larger c, i.e. stronger
    regularization of the Gram diagonal.
    """
    hm = _as_matrix(h)
    t = np.asarray(t, dtype=float)
    if not spec.grid:
        raise ConfigError("ridge grid is empty")
    n = hm.shape[0]
    if n < spec.folds:
        raise ConfigError(f"{n} samples cannot be split into {spec.folds} folds")
    order = np.random.default_rng(seed).permutation(n)
    folds = np.array_split(order, spec.folds)
    errors = {}
    for c in spec.grid:
        fold_mse = []
        for k in range(spec.folds):
            val = folds[k]
            train = np.concatenate([folds[j] for j in range(spec.folds) if j != k])
            w = train_output_weights(hm[train], t[train], c)
            resid = hm[val] @ w.beta - t[val]
            fold_mse.append(float(np.mean(resid**2)))
        errors[c] = float(np.mean(fold_mse))
    best = min(errors.values())
    tol = 1e-9 * max(best, 1e-300)
    return max(c for c, e in errors.items() if e <= best + tol)


def quantize_weights(w: OutputWeights, bits: int) -> OutputWeights:
    """Symmetric uniform quantization, round-to-nearest, exact zero preserved."""
    if not 1 <= bits <= 16:
        raise ConfigError(f"quantization bits must be in 1..16, got {bits!r}")
    beta = np.asarray(w.beta, dtype=float)
    peak = float(np.max(np.abs(beta)))
    if peak == 0.0:
        return OutputWeights(beta=beta.copy(), quant_bits=bits, quant_scale=0.0)
    levels = 2 ** (bits - 1) - 1 if bits > 1 else 1
    scale = peak / levels
    # the positive peak maps exactly to +levels, so the upper clip is +levels
    codes = np.clip(np.round(beta / scale), -(2 ** (bits - 1)), levels)
    return OutputWeights(beta=codes * scale, quant_bits=bits, quant_scale=scale)


def predict(h_row: np.ndarray, w: OutputWeights):
    """Network output sum_j beta_j * h_j; accepts one row or an N x L matrix."""
    h_row = np.asarray(h_row, dtype=float)
    if h_row.shape[-1] != len(w.beta):
        raise ShapeError(f"hidden row length {h_row.shape[-1]} != {len(w.beta)} weights")
    return h_row @ w.beta


def classify(o):
    """Binary decision sign(o) with the tie 0 -> +1."""
    o = np.asarray(o, dtype=float)
    if np.isnan(o).any():
        raise EvaluationError("NaN network output")
    labels = np.where(o >= 0, 1, -1)
    return int(labels) if labels.ndim == 0 else labels


def normalize_hidden(h_row: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Common-mode normalization h_j / (sum_j h_j / sum_i x_i).

    x is the non-negative mapped input representation (e.g. the 10-bit
    codes).  Zero denominators leave the row unnormalized with a warning.
    """
    h_row = np.asarray(h_row, dtype=float)
    x = np.asarray(x, dtype=float)
    h_sum = float(h_row.sum())
    x_sum = float(x.sum())
    if h_sum <= 0 or x_sum <= 0:
        warnings.warn(
            "normalization undefined (zero hidden or input sum); row passed through",
            NormalizationWarning,
            stacklevel=2,
        )
        return h_row.copy()
    return h_row * (x_sum / h_sum)


def normalize_hidden_matrix(h, codes: np.ndarray) -> np.ndarray:
    """Row-wise normalize_hidden over an N x L matrix and matching code matrix."""
    hm = _as_matrix(h)
    codes = np.asarray(codes, dtype=float)
    return np.vstack([normalize_hidden(row, c) for row, c in zip(hm, codes)])


def save_model(path, cfg: ChipConfig, weights: OutputWeights) -> None:
    """JSON model file: chip config snapshot plus full-precision beta.

    Together with the seeded mismatch draw this reproduces predictions
    bit-exactly.
    """
    doc = {
        "chip": json.loads(cfg.to_json()),
        "output_weights": weights.to_dict(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)


def load_model(path) -> tuple[ChipConfig, OutputWeights]:
    with open(path) as fh:
        doc = json.load(fh)
    return ChipConfig(**doc["chip"]), OutputWeights.from_dict(doc["output_weights"])
