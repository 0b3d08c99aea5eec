"""Shared test helpers: synthetic datasets and exact-arithmetic chip setups."""
from __future__ import annotations

import numpy as np
import pytest

from elmchip.chip import ChipConfig, WeightMatrix, CODE_LEVELS
from elmchip.data import Dataset


def make_classification(
    n: int = 300,
    d: int = 6,
    seed: int = 0,
    train_frac: float = 0.6,
    separation: float = 1.2,
) -> Dataset:
    """Two Gaussian blobs in [-1, 1]^d with a deterministic stratified split."""
    rng = np.random.default_rng(seed)
    half = n // 2
    centers = np.zeros((2, d))
    centers[0, : d // 2 + 1] = +separation / 2
    centers[1, : d // 2 + 1] = -separation / 2
    x = np.vstack(
        [
            rng.normal(centers[0], 0.35, size=(half, d)),
            rng.normal(centers[1], 0.35, size=(n - half, d)),
        ]
    )
    x = np.clip(x, -1.0, 1.0)
    y = np.concatenate([np.ones(half), -np.ones(n - half)])
    order = rng.permutation(n)
    x, y = x[order], y[order]
    n_train = int(train_frac * n)
    return Dataset(
        name="blobs",
        features=x,
        targets=y,
        train_idx=np.arange(n_train),
        test_idx=np.arange(n_train, n),
        task="classification",
        col_min=-np.ones(d),
        col_max=np.ones(d),
        metadata={"seed": seed},
    )


def integer_chip(d: int, l: int, b: int = 14, seed: int = 7):
    """Chip whose DAC currents are exact integers (i_ref = CODE_LEVELS).

    With integer weight entries every current sum is integer-valued and well
    below 2^53, so float64 arithmetic is exact regardless of summation
    order — the setting for bit-exact oracle comparisons.
    """
    cfg = ChipConfig(
        sigma_vt=16e-3,
        d=d,
        l=l,
        i_rst=1e9,
        i_ref=float(CODE_LEVELS),
        i_max=float(CODE_LEVELS),
        b=b,
        seed=seed,
    )
    rng = np.random.default_rng(seed)
    entries = rng.integers(1, 17, size=(d, l)).astype(float)
    w = WeightMatrix(
        entries=entries,
        delta_vt=np.log(entries) * cfg.u_t,
        sigma_vt_used=cfg.sigma_vt,
        u_t_used=cfg.u_t,
        seed_used=seed,
    )
    return cfg, w


@pytest.fixture
def blobs() -> Dataset:
    return make_classification()
