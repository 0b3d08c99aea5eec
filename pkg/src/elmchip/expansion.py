"""Weight-reuse rotations.

Circular shifts of the physical weight matrix virtually expand the hidden
layer beyond the fabricated column count and the input dimension beyond the
fabricated row count, plus an explicit-matrix oracle for equivalence tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chip import ChipConfig, WeightMatrix, forward, input_currents, map_input, neuron_counts
from .errors import CapacityError, ConfigError, ShapeError


@dataclass(frozen=True)
class VirtualShape:
    """Physical (k rows, n columns) and virtual (d inputs, l neurons) geometry."""

    k: int
    n: int
    d: int
    l: int

    def __post_init__(self):
        if min(self.k, self.n, self.d, self.l) < 1:
            raise ConfigError(f"all shape entries must be >= 1, got {self}")
        if self.d > self.k * self.n:
            raise CapacityError(f"virtual input dimension {self.d} exceeds k*n = {self.k * self.n}")
        if self.l > self.k * self.n:
            raise CapacityError(f"virtual hidden count {self.l} exceeds k*n = {self.k * self.n}")

    @property
    def chunks(self) -> int:
        return math.ceil(self.d / self.k)

    @property
    def blocks(self) -> int:
        return math.ceil(self.l / self.n)


def _rolled(w: WeightMatrix, steps: int, axis: int) -> WeightMatrix:
    if steps < 0:
        raise ConfigError(f"rotation steps must be non-negative, got {steps!r}")
    return WeightMatrix(
        entries=np.roll(w.entries, -steps, axis=axis),
        delta_vt=np.roll(w.delta_vt, -steps, axis=axis),
        sigma_vt_used=w.sigma_vt_used,
        u_t_used=w.u_t_used,
        seed_used=w.seed_used,
    )


def rotate_rows(w: WeightMatrix, steps: int) -> WeightMatrix:
    """Row i of the result is row (i + steps) mod k of the input."""
    return _rolled(w, steps % w.shape[0], axis=0)


def rotate_cols(w: WeightMatrix, steps: int) -> WeightMatrix:
    """Column j of the result is column (j + steps) mod n of the input."""
    return _rolled(w, steps % w.shape[1], axis=1)


def _pad_chunk(x: np.ndarray, k: int) -> np.ndarray:
    # feature -1 maps to code 0, i.e. zero current
    if len(x) == k:
        return x
    return np.concatenate([x, -np.ones(k - len(x))])


def _linear_forward(x: np.ndarray, w: WeightMatrix, cfg: ChipConfig) -> np.ndarray:
    """Counter replaced by the identity: pure current accumulation."""
    i_in = input_currents(map_input(x, cfg), cfg)
    return i_in @ w.entries


def virtual_forward(
    x: np.ndarray,
    w: WeightMatrix,
    cfg: ChipConfig,
    shape: VirtualShape,
    *,
    linear: bool = False,
    guard_bits: int | None = None,
    saturating: bool = True,
) -> np.ndarray:
    """Full rotation pipeline: chunked inputs, rotated weights, accumulated counts.

    Block m of the output runs the row-rotated matrix; within a block the
    input is processed in ceil(d/k) chunks of width k (last chunk zero
    padded) against column-rotated matrices, accumulating counter outputs.
    The accumulator saturates at 2^(b + guard_bits); guard_bits defaults to
    ceil(log2(chunks)).  linear=True disables the counter nonlinearity and
    accumulates raw currents (the regime the explicit-matrix oracle covers).

    Chunks of one sample must be accumulated in order: once per-chunk
    saturation clips counts the result depends on how inputs meet rotations.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (shape.d,):
        raise ShapeError(f"expected input of dimension {shape.d}, got shape {x.shape}")
    if w.shape != (shape.k, shape.n):
        raise ShapeError(f"expected physical weights {(shape.k, shape.n)}, got {w.shape}")
    if cfg.d != shape.k or cfg.l != shape.n:
        raise ShapeError(
            f"chip config geometry ({cfg.d}, {cfg.l}) must match physical shape "
            f"({shape.k}, {shape.n})"
        )
    if guard_bits is None:
        guard_bits = max(1, math.ceil(math.log2(shape.chunks))) if shape.chunks > 1 else 0
    cap = 2 ** (cfg.b + guard_bits)

    out = np.empty(shape.blocks * shape.n, dtype=float if linear else np.int64)
    for m in range(shape.blocks):
        w_block = rotate_rows(w, m)
        acc = np.zeros(shape.n, dtype=float if linear else np.int64)
        for c in range(shape.chunks):
            chunk = _pad_chunk(x[c * shape.k : (c + 1) * shape.k], shape.k)
            w_rot = rotate_cols(w_block, c)
            if linear:
                acc = acc + _linear_forward(chunk, w_rot, cfg)
            else:
                acc = acc + forward(chunk, w_rot, cfg)
                if saturating:
                    acc = np.minimum(acc, cap)
        out[m * shape.n : (m + 1) * shape.n] = acc
    return out[: shape.l]


def extended_hidden(
    x: np.ndarray, w: WeightMatrix, cfg: ChipConfig, shape: VirtualShape, **kwargs
) -> np.ndarray:
    """Hidden-count expansion only: d <= k, output length l via row rotations."""
    if shape.d > shape.k:
        raise ShapeError(f"extended_hidden expands hidden count only; d={shape.d} > k={shape.k}")
    return virtual_forward(x, w, cfg, shape, **kwargs)


def extended_forward(
    x: np.ndarray, w: WeightMatrix, cfg: ChipConfig, shape: VirtualShape, **kwargs
) -> np.ndarray:
    """Input-dimension expansion only: l = n, chunked inputs via column rotations."""
    if shape.l != shape.n:
        raise ShapeError(f"extended_forward keeps the physical column count; l={shape.l} != n={shape.n}")
    return virtual_forward(x, w, cfg, shape, **kwargs)


def virtual_hidden_matrix(
    features: np.ndarray,
    w: WeightMatrix,
    cfg: ChipConfig,
    shape: VirtualShape,
    *,
    guard_bits: int | None = None,
    saturating: bool = True,
) -> np.ndarray:
    """Batched virtual_forward over an N x d feature matrix (counts only)."""
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != shape.d:
        raise ShapeError(f"expected N x {shape.d} features, got shape {features.shape}")
    if guard_bits is None:
        guard_bits = math.ceil(math.log2(shape.chunks)) if shape.chunks > 1 else 0
    cap = 2 ** (cfg.b + guard_bits)

    n_rows = features.shape[0]
    chunks = []
    for c in range(shape.chunks):
        block = features[:, c * shape.k : (c + 1) * shape.k]
        if block.shape[1] < shape.k:
            block = np.hstack([block, -np.ones((n_rows, shape.k - block.shape[1]))])
        chunks.append(input_currents(map_input(block, cfg), cfg))

    out = np.empty((n_rows, shape.blocks * shape.n), dtype=np.int64)
    for m in range(shape.blocks):
        w_block = rotate_rows(w, m)
        acc = np.zeros((n_rows, shape.n), dtype=np.int64)
        for c, i_in in enumerate(chunks):
            counts = neuron_counts(i_in @ rotate_cols(w_block, c).entries, cfg)
            acc = acc + counts
            if saturating:
                acc = np.minimum(acc, cap)
        out[:, m * shape.n : (m + 1) * shape.n] = acc
    return out[:, : shape.l].astype(float)


def build_virtual_matrix(w: WeightMatrix, shape: VirtualShape) -> np.ndarray:
    """Explicit d x l matrix equivalent to the rotation pipeline.

    Entry (c*k + i, m*n + j) is w[(i + m) mod k, (j + c) mod n]: exact for
    ideal linear accumulation (no counter saturation).
    """
    if w.shape != (shape.k, shape.n):
        raise ShapeError(f"expected physical weights {(shape.k, shape.n)}, got {w.shape}")
    k, n = shape.k, shape.n
    full = np.empty((shape.chunks * k, shape.blocks * n))
    for m in range(shape.blocks):
        rolled_rows = np.roll(w.entries, -m, axis=0)
        for c in range(shape.chunks):
            full[c * k : (c + 1) * k, m * n : (m + 1) * n] = np.roll(rolled_rows, -c, axis=1)
    return full[: shape.d, : shape.l]
