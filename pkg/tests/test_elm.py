"""ELM training pipeline tests: ridge solves, quantization, normalization."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from elmchip.chip import forward, map_input, nominal_config, sample_mismatch
from elmchip.elm import (
    HiddenMatrix,
    OutputWeights,
    RidgeSpec,
    build_hidden_matrix,
    classify,
    cross_validate_ridge,
    load_model,
    normalize_hidden,
    predict,
    quantize_weights,
    save_model,
    train_output_weights,
)
from elmchip.errors import (
    ConfigError,
    EvaluationError,
    NormalizationWarning,
    ShapeError,
    SingularMatrixError,
)


def _ridge_oracle(h: np.ndarray, t: np.ndarray, c: float) -> np.ndarray:
    """Independent least-squares oracle: augmented system solved by lstsq.

    min ||H b - t||^2 + (1/c)||b||^2 == ordinary least squares on H stacked
    over sqrt(1/c)*I with zero-padded targets.
    """
    l = h.shape[1]
    aug = np.vstack([h, np.sqrt(1.0 / c) * np.eye(l)])
    rhs = np.concatenate([t, np.zeros(l)])
    sol, *_ = np.linalg.lstsq(aug, rhs, rcond=None)
    return sol


# ---------------------------------------------------------------------------
# Training


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.integers(1, 8), st.integers(0, 2**31))
def test_least_squares_oracle(n, l, seed):
    # random (continuously distributed, hence well-conditioned) small systems
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(n, l))
    t = rng.normal(size=n)
    c = 1e12
    beta = train_output_weights(h, t, c).beta
    ref = _ridge_oracle(h, t, c)
    scale = max(np.max(np.abs(ref)), 1.0)
    assert np.max(np.abs(beta - ref)) / scale < 1e-6


def test_gram_form_switch_agrees():
    # wide (N < L) and tall (N >= L) paths must solve the same problem
    rng = np.random.default_rng(5)
    h = rng.normal(size=(4, 10))
    t = rng.normal(size=4)
    beta = train_output_weights(h, t, 64.0).beta
    ref = _ridge_oracle(h, t, 64.0)
    np.testing.assert_allclose(beta, ref, rtol=1e-8, atol=1e-10)


@given(st.integers(0, 1000))
def test_ridge_norm_monotone(seed):
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(12, 6))
    t = rng.normal(size=12)
    norms = [
        float(np.linalg.norm(train_output_weights(h, t, c).beta))
        for c in (2.0**-6, 2.0**0, 2.0**6)
    ]
    assert norms[0] <= norms[1] + 1e-12
    assert norms[1] <= norms[2] + 1e-12


def test_residual_optimality():
    rng = np.random.default_rng(2)
    h = rng.normal(size=(15, 5))
    t = rng.normal(size=15)
    c = 4.0
    beta = train_output_weights(h, t, c).beta

    def objective(b):
        r = h @ b - t
        return float(r @ r + (b @ b) / c)

    base = objective(beta)
    eps = 1e-4 * np.linalg.norm(beta)
    for j in range(len(beta)):
        for sign in (+1.0, -1.0):
            b = beta.copy()
            b[j] += sign * eps
            assert objective(b) >= base - 1e-12 * abs(base)


def test_zero_hidden_matrix_rejected():
    with pytest.raises(SingularMatrixError):
        train_output_weights(np.zeros((4, 3)), np.ones(4), 1.0)


def test_shape_mismatch_rejected():
    with pytest.raises(ShapeError):
        train_output_weights(np.ones((4, 3)), np.ones(5), 1.0)


def test_cross_validation_tie_breaks_to_larger_c():
    # all-zero targets give identical (zero) CV error at every grid value
    rng = np.random.default_rng(0)
    h = rng.uniform(0.1, 1.0, size=(50, 4))
    spec = RidgeSpec()
    assert cross_validate_ridge(h, np.zeros(50), spec) == max(spec.grid)


def test_cross_validation_prefers_regularization_when_noisy():
    rng = np.random.default_rng(1)
    h = rng.normal(size=(40, 30))
    t = rng.normal(size=40)  # pure noise: strong ridge should win
    c = cross_validate_ridge(h, t, RidgeSpec(), seed=0)
    assert c <= 1.0


def test_cross_validation_deterministic():
    rng = np.random.default_rng(9)
    h = rng.normal(size=(30, 5))
    t = rng.normal(size=30)
    assert cross_validate_ridge(h, t, RidgeSpec(), seed=4) == cross_validate_ridge(
        h, t, RidgeSpec(), seed=4
    )


def test_ridge_spec_validation():
    with pytest.raises(ConfigError):
        RidgeSpec(c=0.0)
    with pytest.raises(ConfigError):
        RidgeSpec(folds=1)
    with pytest.raises(ConfigError):
        RidgeSpec(grid=(1.0, -2.0))


# ---------------------------------------------------------------------------
# Quantization


@settings(max_examples=100)
@given(
    hnp.arrays(float, st.integers(1, 32), elements=st.floats(-10, 10, allow_nan=False)),
    st.integers(1, 16),
)
def test_quantization_error_bound(beta, bits):
    w = OutputWeights(beta=beta)
    q = quantize_weights(w, bits)
    if q.quant_scale == 0.0:
        np.testing.assert_array_equal(q.beta, beta)
    else:
        assert np.max(np.abs(q.beta - w.beta)) <= q.quant_scale / 2 + 1e-15


def test_quantization_bits_domain():
    w = OutputWeights(beta=np.ones(3))
    for bad in (0, 17):
        with pytest.raises(ConfigError):
            quantize_weights(w, bad)


def test_quantization_16_bits_near_lossless():
    rng = np.random.default_rng(3)
    beta = rng.normal(size=64)
    q = quantize_weights(OutputWeights(beta=beta), 16)
    assert np.max(np.abs(q.beta - beta)) <= np.max(np.abs(beta)) / (2**15 - 1)


# ---------------------------------------------------------------------------
# Prediction, classification, normalization


def test_predict_row_and_matrix():
    w = OutputWeights(beta=np.array([1.0, -2.0, 0.5]))
    row = np.array([2.0, 1.0, 4.0])
    assert predict(row, w) == pytest.approx(2.0)
    mat = np.vstack([row, 2 * row])
    np.testing.assert_allclose(predict(mat, w), [2.0, 4.0])


@given(st.integers(0, 100))
def test_predict_linearity(seed):
    rng = np.random.default_rng(seed)
    w = OutputWeights(beta=rng.normal(size=8))
    h1, h2 = rng.normal(size=8), rng.normal(size=8)
    lhs = predict(h1 + h2, w)
    rhs = predict(h1, w) + predict(h2, w)
    assert abs(lhs - rhs) <= 1e-9 * max(abs(lhs), abs(rhs), 1.0)


def test_classify_tie_and_nan():
    assert classify(0.0) == 1
    assert classify(-1e-300) == -1
    np.testing.assert_array_equal(classify(np.array([0.5, -0.5, 0.0])), [1, -1, 1])
    with pytest.raises(EvaluationError):
        classify(np.array([1.0, np.nan]))


@given(st.integers(-20, 20), st.integers(0, 50))
def test_normalization_scale_invariance_exact_for_pow2(p, seed):
    # powers of two rescale the significand exponent only: bit-exact identity
    rng = np.random.default_rng(seed)
    h = rng.uniform(0.5, 2.0, size=16)
    x = rng.integers(1, 1024, size=4).astype(float)
    c = 2.0**p
    np.testing.assert_array_equal(normalize_hidden(c * h, x), normalize_hidden(h, x))


@given(st.floats(min_value=1e-3, max_value=1e3), st.integers(0, 50))
def test_normalization_scale_invariance_general(c, seed):
    rng = np.random.default_rng(seed)
    h = rng.uniform(0.5, 2.0, size=16)
    x = rng.integers(1, 1024, size=4).astype(float)
    a = normalize_hidden(c * h, x)
    b = normalize_hidden(h, x)
    np.testing.assert_allclose(a, b, rtol=1e-12)
    assert np.argmax(a) == np.argmax(b)


def test_normalization_zero_sum_passthrough():
    with pytest.warns(NormalizationWarning):
        out = normalize_hidden(np.zeros(4), np.array([5.0]))
    np.testing.assert_array_equal(out, np.zeros(4))


def test_normalization_restores_input_scale():
    h = np.array([2.0, 4.0, 6.0])
    x = np.array([3.0, 3.0])
    out = normalize_hidden(h, x)
    assert out.sum() == pytest.approx(x.sum())


# ---------------------------------------------------------------------------
# Hidden matrix construction and model round trip


def test_build_hidden_matrix_rows_equal_forward():
    cfg = nominal_config(d=3, l=12, seed=6)
    w = sample_mismatch(cfg)
    x = np.random.default_rng(0).uniform(-1, 1, size=(9, 3))
    hm = build_hidden_matrix(x, w, cfg)
    assert hm.n_samples == 9 and hm.n_neurons == 12
    for k in range(9):
        np.testing.assert_array_equal(hm.values[k], forward(x[k], w, cfg).astype(float))


def test_hidden_matrix_immutable_and_validated():
    hm = HiddenMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        hm.values[0, 0] = 5.0
    with pytest.raises(ShapeError):
        HiddenMatrix(np.ones(3))


def test_model_save_load_round_trip(tmp_path):
    cfg = nominal_config(d=2, l=6, seed=8)
    w = sample_mismatch(cfg)
    x = np.random.default_rng(1).uniform(-1, 1, size=(20, 2))
    h = build_hidden_matrix(x, w, cfg)
    out = train_output_weights(h, np.sin(x[:, 0]), 16.0)
    path = tmp_path / "model.json"
    save_model(path, cfg, out)
    cfg2, out2 = load_model(path)
    assert cfg2 == cfg
    np.testing.assert_array_equal(out2.beta, out.beta)
    # bit-exact prediction replay from the stored model
    h2 = build_hidden_matrix(x, sample_mismatch(cfg2), cfg2)
    np.testing.assert_array_equal(predict(h2.values, out2), predict(h.values, out))
