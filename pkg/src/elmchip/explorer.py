"""Design-space exploration harness.

Composes the chip model, ELM training, expansion and analysis modules into
the sweep/benchmark/robustness experiments, emitting plot-ready CSV/JSON.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np

from . import analysis, elm
from .chip import (
    ChipConfig,
    map_input,
    nominal_config,
    sample_mismatch,
    with_vdd,
)
from .data import Dataset, generate_sinc, sinc_clean
from .elm import (
    RidgeSpec,
    build_hidden_matrix,
    classify,
    cross_validate_ridge,
    normalize_hidden_matrix,
    predict,
    quantize_weights,
    train_output_weights,
)
from .errors import ConfigError, NormalizationWarning, SingularMatrixError
from .expansion import VirtualShape, virtual_hidden_matrix

L_MIN_NOT_REACHED = -1  # sentinel: threshold never met up to the L cap

DEFAULT_RATIO_GRID = (0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.5)
DEFAULT_SIGMA_GRID = (5e-3, 15e-3, 25e-3, 45e-3)


@dataclass(frozen=True)
class SweepSpec:
    """What to sweep, how often, and under which fixed chip overrides."""

    name: str
    grid: tuple
    trials: int = 50
    seed: int = 0
    overrides: dict = field(default_factory=dict)
    task: str = "sinc"

    def __post_init__(self):
        if not self.grid:
            raise ConfigError("sweep grid must be non-empty")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials!r}")


@dataclass
class SweepReport:
    """Per-grid-point results plus derived summary and provenance."""

    columns: tuple
    rows: list
    summary: dict
    provenance: dict


def derive_seed(master: int, *indices: int) -> int:
    """Deterministic per-(point, trial) seed stream from the master seed."""
    return int(np.random.SeedSequence((master, *indices)).generate_state(1)[0])


def make_provenance(**params) -> dict:
    doc = json.dumps(params, sort_keys=True, default=str)
    return {
        "config_hash": hashlib.sha256(doc.encode()).hexdigest()[:16],
        "params": params,
    }


def emit(report: SweepReport, path, fmt: str = "csv") -> None:
    """Write a report; bit-stable for identical inputs."""
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(report.columns)
            for row in report.rows:
                writer.writerow([_cell(row.get(c)) for c in report.columns])
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump(asdict(report), fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown output format {fmt!r}; use csv or json")


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _rms(a: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(a))))


def _norm_quiet(h, codes) -> np.ndarray:
    """Row-wise normalization without the zero-sum warning.

    Rows whose codes are all zero carry exactly-zero counts, so the
    passthrough fallback is exact there and the warning is noise.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NormalizationWarning)
        return normalize_hidden_matrix(h, codes)


# ---------------------------------------------------------------------------
# task evaluation primitives


def _fit_beta(h_train, t_train, ridge: RidgeSpec, cv: bool, seed: int):
    c = cross_validate_ridge(h_train, t_train, ridge, seed=seed) if cv else ridge.c
    return train_output_weights(h_train, t_train, c), c


def classification_miss_rate(
    dataset: Dataset,
    cfg: ChipConfig,
    ridge: RidgeSpec,
    *,
    cv: bool = True,
    beta_bits: int | None = None,
    normalized: bool = False,
) -> float:
    """Train on the dataset's train split, return test miss rate in percent."""
    weights = sample_mismatch(cfg)
    h_train = build_hidden_matrix(dataset.train_features, weights, cfg).values
    h_test = build_hidden_matrix(dataset.test_features, weights, cfg).values
    if normalized:
        h_train = normalize_hidden_matrix(h_train, map_input(dataset.train_features, cfg))
        h_test = normalize_hidden_matrix(h_test, map_input(dataset.test_features, cfg))
    out, _ = _fit_beta(h_train, dataset.train_targets, ridge, cv, cfg.seed)
    if beta_bits is not None:
        out = quantize_weights(out, beta_bits)
    miss = classify(predict(h_test, out)) != dataset.test_targets
    return 100.0 * float(np.mean(miss))


def sinc_regression_error(
    cfg: ChipConfig,
    *,
    n_train: int = 5000,
    n_test: int = 1000,
    noise_sigma: float = 0.2,
    seed: int = 0,
    ridge: RidgeSpec | None = None,
    cv: bool = False,
) -> float:
    """RMS error against the clean target on held-out points."""
    ridge = ridge or RidgeSpec()
    ds = generate_sinc(n_train + n_test, noise_sigma, seed=seed, train_n=n_train)
    weights = sample_mismatch(cfg)
    h_train = build_hidden_matrix(ds.train_features, weights, cfg).values
    h_test = build_hidden_matrix(ds.test_features, weights, cfg).values
    out, _ = _fit_beta(h_train, ds.train_targets, ridge, cv, cfg.seed)
    clean = ds.clean_targets[ds.test_idx]
    return _rms(predict(h_test, out) - clean)


# ---------------------------------------------------------------------------
# Parameter-choice sweeps


def sweep_ratio(
    ratios=DEFAULT_RATIO_GRID,
    sigmas=DEFAULT_SIGMA_GRID,
    *,
    trials: int = 10,
    seed: int = 0,
    threshold: float = 0.08,
    l_cap: int = 1024,
    l_floor: int = 4,
    n_train: int = 500,
    n_test: int = 200,
    noise_sigma: float = 0.2,
    b: int = 14,
    ridge_c: float = 16.0,
) -> SweepReport:
    """L_min (smallest hidden count meeting the error threshold) per (ratio, sigma).

    Each trial draws one chip at the L cap; smaller hidden layers reuse its
    leading columns, so the search over L is a cheap re-solve.  Counts are
    scaled to [0, 1] by the counter capacity before the solve so ridge_c is
    meaningful at every counter resolution.
    """
    if not ratios or not sigmas:
        raise ConfigError("ratio and sigma grids must be non-empty")
    rows = []
    for si, sigma in enumerate(sigmas):
        for ri, ratio in enumerate(ratios):
            trial_data = []
            for t in range(trials):
                ts = derive_seed(seed, si, ri, t)
                ds = generate_sinc(n_train + n_test, noise_sigma, seed=ts, train_n=n_train)
                cfg = nominal_config(d=1, l=l_cap, sigma_vt=sigma, ratio=ratio, b=b, seed=ts)
                weights = sample_mismatch(cfg)
                scale = float(cfg.counter_max)
                h_train = build_hidden_matrix(ds.train_features, weights, cfg).values / scale
                h_test = build_hidden_matrix(ds.test_features, weights, cfg).values / scale
                trial_data.append((h_train, ds.train_targets, h_test, ds.clean_targets[ds.test_idx]))

            cache: dict[int, float] = {}

            def mean_error(l: int) -> float:
                if l not in cache:
                    errs = []
                    for h_train, t_train, h_test, clean in trial_data:
                        try:
                            out = train_output_weights(h_train[:, :l], t_train, ridge_c)
                            errs.append(_rms(h_test[:, :l] @ out.beta - clean))
                        except SingularMatrixError:
                            errs.append(math.inf)
                    cache[l] = float(np.mean(errs))
                return cache[l]

            l_min = _search_l_min(mean_error, threshold, l_floor, l_cap)
            rows.append(
                {
                    "sigma_vt": sigma,
                    "ratio": ratio,
                    "l_min": l_min,
                    "error_at_l_min": mean_error(l_min) if l_min != L_MIN_NOT_REACHED else math.nan,
                }
            )
    summary = _ratio_summary(rows, sigmas)
    prov = make_provenance(
        sweep="ratio", ratios=list(ratios), sigmas=list(sigmas), trials=trials, seed=seed,
        threshold=threshold, l_cap=l_cap, n_train=n_train, n_test=n_test,
        noise_sigma=noise_sigma, b=b, ridge_c=ridge_c,
    )
    return SweepReport(("sigma_vt", "ratio", "l_min", "error_at_l_min"), rows, summary, prov)


def _search_l_min(mean_error, threshold: float, l_floor: int, l_cap: int) -> int:
    """Doubling search then binary refinement for the smallest passing L."""
    l = l_floor
    prev = None
    while l <= l_cap:
        if mean_error(l) <= threshold:
            break
        prev, l = l, 2 * l
    else:
        return L_MIN_NOT_REACHED
    if prev is None:
        return l
    lo, hi = prev, l  # error(lo) > threshold >= error(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mean_error(mid) <= threshold:
            hi = mid
        else:
            lo = mid
    return hi


def _ratio_summary(rows, sigmas) -> dict:
    summary = {}
    for sigma in sigmas:
        pts = [r for r in rows if r["sigma_vt"] == sigma and r["l_min"] != L_MIN_NOT_REACHED]
        if pts:
            best = min(pts, key=lambda r: (r["l_min"], -r["ratio"]))
            summary[f"best_ratio_sigma_{sigma:g}"] = best["ratio"]
            summary[f"l_min_at_best_sigma_{sigma:g}"] = best["l_min"]
    return summary


def sweep_beta_bits(
    dataset: Dataset,
    *,
    trials: int = 50,
    seed: int = 0,
    l: int = 128,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    b: int = 14,
    bits_grid=tuple(range(1, 17)),
    ridge_c: float = 2.0**10,
    plateau_pp: float = 0.5,
) -> SweepReport:
    """Classification error vs output-weight resolution, with plateau onset."""
    per_bits = {bits: [] for bits in bits_grid}
    for t in range(trials):
        ts = derive_seed(seed, t)
        cfg = nominal_config(
            d=dataset.n_features, l=l, sigma_vt=sigma_vt, ratio=ratio, b=b, seed=ts
        )
        weights = sample_mismatch(cfg)
        h_train = build_hidden_matrix(dataset.train_features, weights, cfg).values
        h_test = build_hidden_matrix(dataset.test_features, weights, cfg).values
        out = train_output_weights(h_train, dataset.train_targets, ridge_c)
        for bits in bits_grid:
            q = quantize_weights(out, bits)
            miss = classify(predict(h_test, q)) != dataset.test_targets
            per_bits[bits].append(100.0 * float(np.mean(miss)))
    rows = [
        {"bits": bits, "miss_rate_mean": float(np.mean(v)), "miss_rate_std": float(np.std(v))}
        for bits, v in per_bits.items()
    ]
    summary = _plateau_summary(rows, "bits", plateau_pp)
    prov = make_provenance(
        sweep="beta_bits", dataset=dataset.name, trials=trials, seed=seed, l=l,
        sigma_vt=sigma_vt, ratio=ratio, b=b, bits_grid=list(bits_grid), ridge_c=ridge_c,
    )
    return SweepReport(("bits", "miss_rate_mean", "miss_rate_std"), rows, summary, prov)


def sweep_counter_bits(
    dataset: Dataset,
    *,
    trials: int = 50,
    seed: int = 0,
    l: int = 128,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    beta_bits: int = 10,
    b_grid=tuple(range(1, 11)),
    ridge_c: float = 2.0**10,
    plateau_pp: float = 0.5,
) -> SweepReport:
    """Classification error vs counter resolution b, with plateau onset."""
    per_b = {b: [] for b in b_grid}
    for t in range(trials):
        ts = derive_seed(seed, t)
        for b in b_grid:
            cfg = nominal_config(
                d=dataset.n_features, l=l, sigma_vt=sigma_vt, ratio=ratio, b=b, seed=ts
            )
            per_b[b].append(
                classification_miss_rate(
                    dataset, cfg, RidgeSpec(c=ridge_c), cv=False, beta_bits=beta_bits
                )
            )
    rows = [
        {"b": b, "miss_rate_mean": float(np.mean(v)), "miss_rate_std": float(np.std(v))}
        for b, v in per_b.items()
    ]
    summary = _plateau_summary(rows, "b", plateau_pp)
    prov = make_provenance(
        sweep="counter_bits", dataset=dataset.name, trials=trials, seed=seed, l=l,
        sigma_vt=sigma_vt, ratio=ratio, beta_bits=beta_bits, b_grid=list(b_grid),
        ridge_c=ridge_c,
    )
    return SweepReport(("b", "miss_rate_mean", "miss_rate_std"), rows, summary, prov)


def _plateau_summary(rows, key: str, plateau_pp: float) -> dict:
    """First grid value whose mean error is within plateau_pp points of the last."""
    asymptote = rows[-1]["miss_rate_mean"]
    onset = next(
        (r[key] for r in rows if r["miss_rate_mean"] <= asymptote + plateau_pp),
        rows[-1][key],
    )
    return {"asymptote_miss_rate": asymptote, "plateau_onset": onset, "plateau_pp": plateau_pp}


# ---------------------------------------------------------------------------
# Energy sweep


def sweep_energy(
    vdds=(0.8, 1.0, 1.2),
    *,
    b: int = 10,
    points: int = 60,
    frac_lo: float = 0.02,
    frac_hi: float = 0.95,
    k_neu_1v: float = 26e3 / 1e-9,
    i_rst_factor: float = 2.5,
    consts: analysis.EnergyConstants | None = None,
) -> SweepReport:
    """Energy per conversion vs I^z_max for several supplies, with argmin per VDD."""
    consts = consts or analysis.EnergyConstants()
    base = nominal_config(d=10, l=128, b=b, k_neu=k_neu_1v, i_rst_factor=i_rst_factor)
    rows = []
    summary = {}
    for vdd in vdds:
        cfg = with_vdd(base, vdd)
        grid = np.linspace(frac_lo, frac_hi, points) * cfg.i_rst
        best = (math.inf, None)
        for i_z_max in grid:
            e_c = analysis.energy_per_conversion(float(i_z_max), cfg, consts)
            t_neu = 2**b / (0.75 * cfg.k_neu * i_z_max)
            rows.append(
                {"vdd": vdd, "i_z_max": float(i_z_max), "e_c": e_c, "t_neu": float(t_neu)}
            )
            if e_c < best[0]:
                best = (e_c, float(i_z_max))
        summary[f"argmin_i_z_max_vdd_{vdd:g}"] = best[1]
        summary[f"min_e_c_vdd_{vdd:g}"] = best[0]
        summary[f"i_flx_vdd_{vdd:g}"] = cfg.i_flx
    prov = make_provenance(
        sweep="energy", vdds=list(vdds), b=b, points=points, frac_lo=frac_lo,
        frac_hi=frac_hi, k_neu_1v=k_neu_1v, i_rst_factor=i_rst_factor,
        alpha1=consts.alpha1, alpha2_isc=consts.alpha2_isc,
    )
    return SweepReport(("vdd", "i_z_max", "e_c", "t_neu"), rows, summary, prov)


# ---------------------------------------------------------------------------
# Benchmarks, regression, robustness, expansion


def run_benchmark(
    dataset: Dataset,
    *,
    l: int = 128,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    b: int = 14,
    trials: int = 20,
    seed: int = 0,
    ridge: RidgeSpec | None = None,
    cv: bool = True,
) -> SweepReport:
    """Test miss rate (mean +/- std over fresh mismatch draws)."""
    ridge = ridge or RidgeSpec()
    rows = []
    for t in range(trials):
        ts = derive_seed(seed, t)
        cfg = nominal_config(
            d=dataset.n_features, l=l, sigma_vt=sigma_vt, ratio=ratio, b=b, seed=ts
        )
        miss = classification_miss_rate(dataset, cfg, ridge, cv=cv)
        rows.append({"trial": t, "seed": ts, "miss_rate": miss})
    rates = [r["miss_rate"] for r in rows]
    summary = {
        "dataset": dataset.name,
        "miss_rate_mean": float(np.mean(rates)),
        "miss_rate_std": float(np.std(rates)),
        "trials": trials,
    }
    prov = make_provenance(
        benchmark=dataset.name, l=l, sigma_vt=sigma_vt, ratio=ratio, b=b,
        trials=trials, seed=seed, cv=cv,
    )
    return SweepReport(("trial", "seed", "miss_rate"), rows, summary, prov)


def run_regression(
    *,
    n_train: int = 5000,
    n_test: int = 1000,
    noise_sigma: float = 0.2,
    l: int = 128,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    b: int = 14,
    seed: int = 0,
    ridge: RidgeSpec | None = None,
    cv: bool = False,
    normalized: bool = False,
) -> SweepReport:
    """Sinc regression; emits an (x, prediction, clean, noisy) table for plotting."""
    ridge = ridge or RidgeSpec()
    cfg = nominal_config(d=1, l=l, sigma_vt=sigma_vt, ratio=ratio, b=b, seed=seed)
    ds = generate_sinc(n_train + n_test, noise_sigma, seed=seed, train_n=n_train)
    weights = sample_mismatch(cfg)
    h_train = build_hidden_matrix(ds.train_features, weights, cfg).values
    h_test = build_hidden_matrix(ds.test_features, weights, cfg).values
    if normalized:
        h_train = _norm_quiet(h_train, map_input(ds.train_features, cfg))
        h_test = _norm_quiet(h_test, map_input(ds.test_features, cfg))
    out, c = _fit_beta(h_train, ds.train_targets, ridge, cv, seed)
    pred = predict(h_test, out)
    clean = ds.clean_targets[ds.test_idx]
    order = np.argsort(ds.features[ds.test_idx, 0])
    rows = [
        {
            "x": float(ds.features[i, 0]),
            "prediction": float(p),
            "clean": float(cl),
            "noisy": float(ds.targets[i]),
        }
        for i, p, cl in zip(ds.test_idx[order], pred[order], clean[order])
    ]
    summary = {"rms_error": _rms(pred - clean), "ridge_c": c, "l": l, "normalized": normalized}
    prov = make_provenance(
        task="sinc", n_train=n_train, n_test=n_test, noise_sigma=noise_sigma, l=l,
        sigma_vt=sigma_vt, ratio=ratio, b=b, seed=seed, normalized=normalized,
    )
    return SweepReport(("x", "prediction", "clean", "noisy"), rows, summary, prov)


def run_robustness(
    mode: str,
    *,
    vdds=(0.8, 1.0, 1.2),
    delta_ts=(-20.0, -10.0, 0.0, 10.0, 20.0),
    seed: int = 0,
    l: int = 128,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    probe_ratio: float = 4.0,
    probe_i_rst_factor: float = 16.0,
    i_rst_factor: float = 1.5,
    scale_i_rst: bool = False,
    b: int = 14,
    n_train: int = 2000,
    n_test: int = 500,
    noise_sigma: float = 0.2,
    cv: bool = True,
    ridge_c: float = 2.0**10,
    min_count: int = 50,
) -> SweepReport:
    """Supply/temperature variation study, raw vs normalized hidden outputs.

    Output weights are trained at the nominal point only; the variation grid
    is test-time.  Probe deviations use a mildly driven chip (probe_ratio,
    large probe_i_rst_factor) so counter quantization does not mask the
    supply common mode.  I_rst is a programmed bias from the current
    reference, so by default it does not track the digital supply
    (scale_i_rst=False); the regression chip runs with low reset-current
    headroom (i_rst_factor) so the oscillator fold-over, which the supply
    shifts only in common mode, provides the fitting nonlinearity instead
    of counter saturation, whose clip point does not track the supply.
    """
    if mode not in ("vdd", "temperature"):
        raise ConfigError(f"robustness mode must be 'vdd' or 'temperature', got {mode!r}")
    grid = tuple(vdds) if mode == "vdd" else tuple(delta_ts)
    nominal = 1.0 if mode == "vdd" else 0.0
    if nominal not in grid:
        raise ConfigError(f"variation grid must include the nominal point {nominal!r}")

    probe_cfg = nominal_config(
        d=1, l=l, sigma_vt=sigma_vt, ratio=probe_ratio, b=b,
        i_rst_factor=probe_i_rst_factor, seed=seed,
    )
    probe_x = np.array([-0.6, -0.3, 0.0, 0.3, 0.6])[:, None]
    probe_codes = map_input(probe_x, probe_cfg)
    probe_weights = sample_mismatch(probe_cfg)

    def probe_counts(point):
        if mode == "vdd":
            cfg_v = with_vdd(probe_cfg, point, scale_i_rst=scale_i_rst)
            return build_hidden_matrix(probe_x, probe_weights, cfg_v).values
        w_t = analysis.temperature_weights(probe_weights, point)
        return build_hidden_matrix(probe_x, w_t, probe_cfg).values

    h_nom = probe_counts(nominal)
    h_nom_norm = _norm_quiet(h_nom, probe_codes)

    reg_cfg = nominal_config(
        d=1, l=l, sigma_vt=sigma_vt, ratio=ratio, b=b, i_rst_factor=i_rst_factor, seed=seed
    )
    ds = generate_sinc(n_train + n_test, noise_sigma, seed=seed, train_n=n_train)
    reg_weights = sample_mismatch(reg_cfg)
    train_codes = map_input(ds.train_features, reg_cfg)
    test_codes = map_input(ds.test_features, reg_cfg)
    h_train = build_hidden_matrix(ds.train_features, reg_weights, reg_cfg).values
    ridge = RidgeSpec(c=ridge_c)
    beta_raw, _ = _fit_beta(h_train, ds.train_targets, ridge, cv, seed)
    beta_norm, _ = _fit_beta(
        _norm_quiet(h_train, train_codes), ds.train_targets, ridge, cv, seed
    )
    clean = ds.clean_targets[ds.test_idx]

    def test_counts(point):
        if mode == "vdd":
            cfg_v = with_vdd(reg_cfg, point, scale_i_rst=scale_i_rst)
            return build_hidden_matrix(ds.test_features, reg_weights, cfg_v).values
        w_t = analysis.temperature_weights(reg_weights, point)
        return build_hidden_matrix(ds.test_features, w_t, reg_cfg).values

    rows = []
    for point in grid:
        h = probe_counts(point)
        mask = h_nom >= min_count
        dev_raw = float(np.max(np.abs(h[mask] - h_nom[mask]) / h_nom[mask]))
        h_norm = _norm_quiet(h, probe_codes)
        dev_norm = float(
            np.max(np.abs(h_norm[mask] - h_nom_norm[mask]) / h_nom_norm[mask])
        )
        h_test = test_counts(point)
        rms_raw = _rms(predict(h_test, beta_raw) - clean)
        rms_norm = _rms(predict(_norm_quiet(h_test, test_codes), beta_norm) - clean)
        rows.append(
            {
                "point": float(point),
                "max_dev_raw": dev_raw,
                "max_dev_norm": dev_norm,
                "rms_raw": rms_raw,
                "rms_norm": rms_norm,
            }
        )
    off_nominal = [r for r in rows if r["point"] != nominal]
    summary = {
        "mode": mode,
        "max_dev_raw": max(r["max_dev_raw"] for r in off_nominal),
        "max_dev_norm": max(r["max_dev_norm"] for r in off_nominal),
        "worst_rms_raw": max(r["rms_raw"] for r in rows),
        "worst_rms_norm": max(r["rms_norm"] for r in rows),
    }
    prov = make_provenance(
        robustness=mode, grid=list(grid), seed=seed, l=l, sigma_vt=sigma_vt,
        ratio=ratio, probe_ratio=probe_ratio, i_rst_factor=i_rst_factor, b=b,
        n_train=n_train, n_test=n_test, ridge_c=ridge_c,
    )
    return SweepReport(
        ("point", "max_dev_raw", "max_dev_norm", "rms_raw", "rms_norm"), rows, summary, prov
    )


def run_expansion_benchmark(
    dataset: Dataset,
    *,
    physical_k: int | None = None,
    physical_n: int = 16,
    virtual_l: int = 128,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    b: int = 14,
    trials: int = 20,
    seed: int = 0,
    ridge: RidgeSpec | None = None,
    cv: bool = True,
) -> SweepReport:
    """Weight-reuse benchmark: physical (k x n) chip vs virtually expanded layer.

    When the dataset dimension fits the physical rows, the plain physical
    miss rate is reported alongside for comparison.
    """
    ridge = ridge or RidgeSpec()
    k = physical_k if physical_k is not None else dataset.n_features
    shape = VirtualShape(k=k, n=physical_n, d=dataset.n_features, l=virtual_l)
    rows = []
    for t in range(trials):
        ts = derive_seed(seed, t)
        cfg = nominal_config(d=k, l=physical_n, sigma_vt=sigma_vt, ratio=ratio, b=b, seed=ts)
        weights = sample_mismatch(cfg)
        row = {"trial": t, "seed": ts}
        if dataset.n_features <= k:
            row["miss_physical"] = classification_miss_rate(dataset, cfg, ridge, cv=cv)
        h_train = virtual_hidden_matrix(dataset.train_features, weights, cfg, shape)
        h_test = virtual_hidden_matrix(dataset.test_features, weights, cfg, shape)
        out, _ = _fit_beta(h_train, dataset.train_targets, ridge, cv, ts)
        miss = classify(predict(h_test, out)) != dataset.test_targets
        row["miss_virtual"] = 100.0 * float(np.mean(miss))
        rows.append(row)
    summary = {
        "dataset": dataset.name,
        "shape": asdict(shape),
        "miss_virtual_mean": float(np.mean([r["miss_virtual"] for r in rows])),
        "miss_virtual_std": float(np.std([r["miss_virtual"] for r in rows])),
    }
    if all("miss_physical" in r for r in rows):
        summary["miss_physical_mean"] = float(np.mean([r["miss_physical"] for r in rows]))
        summary["miss_physical_std"] = float(np.std([r["miss_physical"] for r in rows]))
    prov = make_provenance(
        expansion=dataset.name, k=k, n=physical_n, virtual_l=virtual_l,
        sigma_vt=sigma_vt, ratio=ratio, b=b, trials=trials, seed=seed, cv=cv,
    )
    columns = ("trial", "seed", "miss_physical", "miss_virtual")
    return SweepReport(columns, rows, summary, prov)
