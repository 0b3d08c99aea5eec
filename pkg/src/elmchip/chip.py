"""Behavioral model of the analog signal path.

Digital input code -> DAC current -> mismatch-weighted current sum ->
current-controlled oscillator -> saturating spike counter.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, replace, asdict

import numpy as np

from .errors import ClampWarning, ConfigError, InputDomainError, NoOscillationError, ShapeError

INPUT_BITS = 10
CODE_LEVELS = 2**INPUT_BITS  # 1024
CODE_MAX = CODE_LEVELS - 1

# sub-stream offsets for deriving per-purpose RNGs from the master seed
_MISMATCH_STREAM = 0
_NEURON_GAIN_STREAM = 1


@dataclass(frozen=True)
class ChipConfig:
    """Physical/behavioral parameters of one simulated chip instance.

    All quantities are SI scalars: volts, amperes, farads, seconds.
    """

    sigma_vt: float           # std-dev of threshold-voltage mismatch
    d: int                    # input channels (physical rows)
    l: int                    # hidden neurons (physical columns)
    i_rst: float              # neuron reset current
    i_ref: float              # DAC reference current
    i_max: float              # max per-dimension input current
    t_neu: float = 56e-6      # spike counting window
    b: int = 14               # counter bits
    vdd: float = 1.0
    c_b: float = 50e-15       # neuron feedback capacitor
    u_t: float = 0.025        # thermal voltage
    i_lk: float = 0.0         # leakage current
    kappa: float = 0.7        # inverse sub-threshold slope
    c_mirror: float = 0.4e-12  # per-row mirror capacitor
    b_in: int = INPUT_BITS
    seed: int = 0

    def __post_init__(self):
        for name in ("u_t", "vdd", "c_b", "i_rst", "i_ref", "i_max", "t_neu", "kappa", "c_mirror"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be strictly positive, got {getattr(self, name)!r}")
        if self.sigma_vt < 0:
            raise ConfigError(f"sigma_vt must be non-negative, got {self.sigma_vt!r}")
        if self.i_lk < 0:
            raise ConfigError(f"i_lk must be non-negative, got {self.i_lk!r}")
        if not 1 <= self.b <= 14:
            raise ConfigError(f"counter bits b must be in 1..14, got {self.b!r}")
        if self.b_in != INPUT_BITS:
            raise ConfigError(f"b_in is fixed to {INPUT_BITS}, got {self.b_in!r}")
        if self.d < 1 or self.l < 1:
            raise ConfigError(f"d and l must be >= 1, got d={self.d!r}, l={self.l!r}")

    @property
    def k_neu(self) -> float:
        """Current-to-frequency conversion gain 1/(C_b*VDD)."""
        return 1.0 / (self.c_b * self.vdd)

    @property
    def i_flx(self) -> float:
        """Input current at which spiking frequency peaks."""
        return self.i_rst / 2.0

    @property
    def counter_max(self) -> int:
        return 2**self.b

    @property
    def i_z_sat(self) -> float:
        """Neuron input current saturating the counter within t_neu (linear model)."""
        return self.counter_max / (self.k_neu * self.t_neu)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ChipConfig":
        return cls(**json.loads(text))


def nominal_config(
    *,
    d: int,
    l: int,
    sigma_vt: float = 16e-3,
    ratio: float = 0.75,
    b: int = 14,
    k_neu: float = 26e3 / 1e-9,
    t_neu: float = 56e-6,
    vdd: float = 1.0,
    i_rst_factor: float = 4.0,
    seed: int = 0,
    **overrides,
) -> ChipConfig:
    """Build a config around a target saturation ratio I^z_sat / I^z_max.

    c_b is derived from the requested conversion gain, i_max from the ratio,
    and i_rst defaults to a multiple of the full-scale neuron current so the
    oscillator stays in its near-linear region.  Pass i_rst_factor close to 2
    for energy studies near the frequency peak.
    """
    if ratio <= 0:
        raise ConfigError(f"saturation ratio must be positive, got {ratio!r}")
    c_b = 1.0 / (k_neu * vdd)
    i_z_sat = 2**b / (k_neu * t_neu)
    i_z_max = i_z_sat / ratio
    i_max = i_z_max / d
    cfg = ChipConfig(
        sigma_vt=sigma_vt,
        d=d,
        l=l,
        i_rst=i_rst_factor * i_z_max,
        i_ref=reference_current(i_max),
        i_max=i_max,
        t_neu=t_neu,
        b=b,
        vdd=vdd,
        c_b=c_b,
        seed=seed,
    )
    return replace(cfg, **overrides) if overrides else cfg


def reference_current(i_max: float) -> float:
    """DAC reference so that the full-scale code 2^b_in - 1 yields i_max."""
    return i_max * CODE_LEVELS / CODE_MAX


def with_vdd(cfg: ChipConfig, vdd: float, scale_i_rst: bool = True) -> ChipConfig:
    """Re-bias a chip at a different supply voltage.

    The reset current of the fabricated oscillator tracks the supply, so it
    is scaled proportionally by default.
    """
    i_rst = cfg.i_rst * vdd / cfg.vdd if scale_i_rst else cfg.i_rst
    return replace(cfg, vdd=vdd, i_rst=i_rst)


@dataclass(frozen=True)
class WeightMatrix:
    """d x L matrix of log-normal current-mirror gains.

    delta_vt holds the underlying Gaussian threshold-voltage offsets so the
    weights can be recomputed at a different thermal voltage.
    """

    entries: np.ndarray
    delta_vt: np.ndarray
    sigma_vt_used: float
    u_t_used: float
    seed_used: int

    def __post_init__(self):
        self.entries.setflags(write=False)
        self.delta_vt.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def to_csv(self, path) -> None:
        """Write d rows x L columns at full precision."""
        with open(path, "w") as fh:
            for row in self.entries:
                fh.write(",".join(repr(float(v)) for v in row))
                fh.write("\n")


@dataclass(frozen=True)
class NeuronState:
    """Snapshot of one hidden neuron: summed input current, spike rate, count."""

    i_z: float
    f_sp: float
    count: int


def dac_current(data_in: int, i_ref: float) -> float:
    """Current-splitting DAC output: i_ref * sum_k D_k * 2^(k-10)."""
    data_in = _check_code(data_in)
    return i_ref * data_in / CODE_LEVELS


def mirror_switch_state(data_in: int) -> tuple[bool, bool]:
    """(S1, S2): active-mirror assist when the 4 MSBs are zero, row shutoff at code 0."""
    data_in = _check_code(data_in)
    s1 = data_in < 2**6
    s2 = data_in == 0
    return s1, s2


def _check_code(data_in) -> int:
    code = int(data_in)
    if code != data_in or not 0 <= code <= CODE_MAX:
        raise InputDomainError(f"data_in must be an integer in 0..{CODE_MAX}, got {data_in!r}")
    return code


def neuron_frequency(i_z: float, cfg: ChipConfig) -> float:
    """Spiking frequency I^z(I_rst - I^z)/(I_rst*C_b*VDD), zero at and beyond I_rst."""
    if i_z < 0:
        raise InputDomainError(f"neuron input current must be non-negative, got {i_z!r}")
    if i_z >= cfg.i_rst:
        return 0.0
    return i_z * (cfg.i_rst - i_z) / (cfg.i_rst * cfg.c_b * cfg.vdd)


def neuron_period(i_z: float, cfg: ChipConfig, min_frequency: float = 0.0) -> float:
    """Oscillation period: discharge time plus reset time.

    Raises NoOscillationError outside (I_lk, I_rst + I_lk) or when the
    resulting frequency falls below min_frequency.
    """
    if not cfg.i_lk < i_z < cfg.i_rst + cfg.i_lk:
        raise NoOscillationError(
            f"i_z={i_z!r} outside oscillation window ({cfg.i_lk!r}, {cfg.i_rst + cfg.i_lk!r})"
        )
    period = cfg.c_b * cfg.vdd * (1.0 / (i_z - cfg.i_lk) + 1.0 / (cfg.i_rst - i_z + cfg.i_lk))
    if min_frequency > 0 and 1.0 / period < min_frequency:
        raise NoOscillationError(f"frequency {1.0 / period!r} Hz below floor {min_frequency!r} Hz")
    return period


def hidden_count(i_z: float, cfg: ChipConfig) -> int:
    """Saturating counter output min(floor(f_sp * t_neu), 2^b)."""
    if i_z < 0:
        raise InputDomainError(f"neuron input current must be non-negative, got {i_z!r}")
    return int(neuron_counts(np.asarray([i_z], dtype=float), cfg)[0])


def neuron_counts(i_z: np.ndarray, cfg: ChipConfig) -> np.ndarray:
    """Vectorized counter transfer function over an array of input currents."""
    i_z = np.asarray(i_z, dtype=float)
    f_sp = np.where(
        i_z >= cfg.i_rst,
        0.0,
        i_z * (cfg.i_rst - i_z) / (cfg.i_rst * cfg.c_b * cfg.vdd),
    )
    f_sp = np.maximum(f_sp, 0.0)
    return np.minimum(np.floor(f_sp * cfg.t_neu), float(cfg.counter_max)).astype(np.int64)


def _stream_rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream,)))


def sample_mismatch(cfg: ChipConfig) -> WeightMatrix:
    """Draw the d x L log-normal weight matrix exp(dVt/U_T), dVt ~ N(0, sigma_vt^2).

    Deterministic for a given seed; the mismatch draw lives on a fixed
    sub-stream of the master seed.
    """
    rng = _stream_rng(cfg.seed, _MISMATCH_STREAM)
    delta_vt = rng.standard_normal((cfg.d, cfg.l)) * cfg.sigma_vt
    return WeightMatrix(
        entries=np.exp(delta_vt / cfg.u_t),
        delta_vt=delta_vt,
        sigma_vt_used=cfg.sigma_vt,
        u_t_used=cfg.u_t,
        seed_used=cfg.seed,
    )


def sample_neuron_gain(cfg: ChipConfig, sigma_vt_neuron: float) -> np.ndarray:
    """Optional per-neuron log-normal conversion-gain spread (off by default).

    The measured weight distribution already lumps neuron mismatch in, so
    forward() only applies this when a gain vector is passed explicitly.
    """
    rng = _stream_rng(cfg.seed, _NEURON_GAIN_STREAM)
    return np.exp(rng.standard_normal(cfg.l) * sigma_vt_neuron / cfg.u_t)


def map_input(x: np.ndarray, cfg: ChipConfig) -> np.ndarray:
    """Affine map of [-1, 1] features to 10-bit codes, round-half-up.

    Values outside [-1, 1] are clamped with a ClampWarning; NaN is rejected.
    """
    x = np.asarray(x, dtype=float)
    if np.isnan(x).any():
        raise InputDomainError("NaN in input features")
    if (np.abs(x) > 1).any():
        warnings.warn("input features outside [-1, 1] clamped", ClampWarning, stacklevel=2)
        x = np.clip(x, -1.0, 1.0)
    return np.floor((x + 1.0) / 2.0 * CODE_MAX + 0.5).astype(np.int64)


def input_currents(codes: np.ndarray, cfg: ChipConfig) -> np.ndarray:
    """Per-channel DAC currents for a vector of 10-bit codes."""
    codes = np.asarray(codes)
    if (codes < 0).any() or (codes > CODE_MAX).any():
        raise InputDomainError(f"codes must be in 0..{CODE_MAX}")
    return codes / CODE_LEVELS * cfg.i_ref


def forward(
    x: np.ndarray,
    weights: WeightMatrix,
    cfg: ChipConfig,
    neuron_gain: np.ndarray | None = None,
) -> np.ndarray:
    """One sample through the full signal path: counts for all L neurons."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (cfg.d,):
        raise ShapeError(f"expected input of dimension {cfg.d}, got shape {x.shape}")
    if weights.shape != (cfg.d, cfg.l):
        raise ShapeError(f"expected weights of shape {(cfg.d, cfg.l)}, got {weights.shape}")
    i_in = input_currents(map_input(x, cfg), cfg)
    i_z = i_in @ weights.entries
    if neuron_gain is not None:
        i_z = i_z * neuron_gain
    return neuron_counts(i_z, cfg)
