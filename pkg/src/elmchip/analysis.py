"""Closed-form noise, speed and energy models of the mixed-signal array.

Includes adaptive quadrature for the energy-per-conversion integral, the
settling-vs-counting-time contour, energy-per-MAC accounting and the
temperature dependence of the mismatch weights.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict

import numpy as np

from .chip import ChipConfig, WeightMatrix, neuron_frequency
from .errors import InputDomainError, ModelDomainError

ELECTRON_CHARGE = 1.602e-19
ACTIVE_MIRROR_BOOST = 5.84  # bandwidth gain of the active current mirror
NOMINAL_TEMPERATURE = 300.0  # K


@dataclass(frozen=True)
class SpeedReport:
    """Conversion-time budget for one chip operating point."""

    t_cm_min: float
    t_cm_max: float
    t_cm_avg: float
    t_neu: float
    t_c: float
    dominant: str  # "mirror" or "neuron"

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass(frozen=True)
class EnergyReport:
    """Energy/power figures at one operating point."""

    e_sp: float
    e_c: float
    p_vdd: float
    p_avdd: float
    pj_per_mac: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


@dataclass(frozen=True)
class EnergyConstants:
    """Fitted neuron energy coefficients.

    Defaults are the simulation values at VDD = 1 V; the measured chip fit
    is alpha1 = 0.3 pF, alpha2_isc = 0.076 uA.
    """

    alpha1: float = 0.2e-12        # switching capacitance equivalent
    alpha2_isc: float = 0.03e-6    # inverter short-circuit current term
    e_mult: float = 7.1e-12        # second-stage digital multiply energy
    p_avdd: float = 3.4e-6         # analog supply power


def snr_mirror(c: float, w0: float = 1.0, kappa: float = 0.7, u_t: float = 0.025) -> float:
    """Thermal-noise SNR of one mirror row: 2*C*U_T*w0 / (q*kappa*(w0 + 1))."""
    if c <= 0 or w0 <= 0:
        raise InputDomainError("capacitance and mirror gain must be positive")
    return 2.0 * c * u_t * w0 / (ELECTRON_CHARGE * kappa * (w0 + 1.0))


def settling_time(
    i_in: float,
    c: float,
    active: bool = False,
    kappa: float = 0.7,
    u_t: float = 0.025,
) -> float:
    """Mirror settling time 4*C*U_T/(kappa*i_in), boosted 5.84x when active."""
    if i_in <= 0:
        raise InputDomainError(f"mirror input current must be positive, got {i_in!r}")
    t = 4.0 * c * u_t / (kappa * i_in)
    return t / ACTIVE_MIRROR_BOOST if active else t


def neuron_counting_time(b: float, k_neu: float, d: int, i_max: float) -> float:
    """Counting window 2^b / (0.75 * K_neu * d * I_max) at the 0.75 saturation ratio.

    b may be fractional (capacity 2^b on the settling/counting contour is
    generally not a power of two).
    """
    if min(k_neu, i_max) <= 0 or d < 1 or not math.isfinite(b):
        raise InputDomainError("k_neu, i_max must be positive, d >= 1, b finite")
    return 2**b / (0.75 * k_neu * d * i_max)


def contour_counter_capacity(
    d: int, c: float, k_neu: float, kappa: float = 0.7, u_t: float = 0.025
) -> float:
    """Counter capacity 2^b on the T_cm = T_neu contour: 6*d*C*U_T*K_neu/kappa."""
    if min(d, c, k_neu) <= 0:
        raise InputDomainError("all arguments must be positive")
    return 6.0 * d * c * u_t * k_neu / kappa


def speed_report(cfg: ChipConfig, active_mirror: bool = True) -> SpeedReport:
    """Settling/counting time budget; t_c = max(t_cm_avg, t_neu)."""
    c = cfg.c_mirror
    t_cm_min = settling_time(cfg.i_max, c, active=False, kappa=cfg.kappa, u_t=cfg.u_t)
    t_cm_max = settling_time(
        cfg.i_max / 2**cfg.b_in, c, active=active_mirror, kappa=cfg.kappa, u_t=cfg.u_t
    )
    t_cm_avg = settling_time(cfg.i_max / 2.0, c, active=False, kappa=cfg.kappa, u_t=cfg.u_t)
    t_neu = neuron_counting_time(cfg.b, cfg.k_neu, cfg.d, cfg.i_max)
    t_c = max(t_cm_avg, t_neu)
    return SpeedReport(
        t_cm_min=t_cm_min,
        t_cm_max=t_cm_max,
        t_cm_avg=t_cm_avg,
        t_neu=t_neu,
        t_c=t_c,
        dominant="mirror" if t_cm_avg >= t_neu else "neuron",
    )


def energy_per_spike(i_z: float, cfg: ChipConfig, consts: EnergyConstants) -> float:
    """Per-spike energy: switching + inverter short-circuit + V_mem short-circuit."""
    if not 0 < i_z < cfg.i_rst:
        raise ModelDomainError(f"energy model requires 0 < i_z < i_rst, got {i_z!r}")
    f_sp = neuron_frequency(i_z, cfg)
    vdd = cfg.vdd
    return (
        consts.alpha1 * vdd**2
        + consts.alpha2_isc * vdd / f_sp
        + cfg.c_b * i_z * vdd**2 / (cfg.i_rst - i_z + cfg.i_lk)
    )


def power_vdd(l: int, f_sp: float, cfg: ChipConfig, consts: EnergyConstants) -> float:
    """Digital-supply power L*(alpha1*VDD^2*f_sp + alpha2_isc*VDD)."""
    if l < 1 or f_sp < 0:
        raise InputDomainError("need l >= 1 and f_sp >= 0")
    return l * (consts.alpha1 * cfg.vdd**2 * f_sp + consts.alpha2_isc * cfg.vdd)


def adaptive_simpson(f, a: float, b: float, rel_tol: float = 1e-6, max_depth: int = 60) -> float:
    """Adaptive Simpson quadrature with interval bisection."""

    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, tol, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        return recurse(lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1
        )

    mid = 0.5 * (a + b)
    fa, fm, fb = f(a), f(mid), f(b)
    whole = simpson(a, b, fa, fm, fb)
    tol = abs(whole) * rel_tol if whole != 0 else rel_tol
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def conversion_energy_integral(
    i_z_max: float,
    b: int,
    k_neu: float,
    e_sp,
    count_rate,
    rel_tol: float = 1e-6,
) -> float:
    """Generic form 2^b/(0.75*K_neu*Izmax^2) * integral of E_sp(i)*rate(i) di."""
    prefactor = 2**b / (0.75 * k_neu * i_z_max**2)
    return prefactor * adaptive_simpson(
        lambda i: e_sp(i) * count_rate(i), 0.0, i_z_max, rel_tol=rel_tol
    )


def energy_per_conversion(
    i_z_max: float,
    cfg: ChipConfig,
    consts: EnergyConstants,
    rel_tol: float = 1e-6,
) -> float:
    """Average energy to convert a uniformly distributed input current to a count.

    The count rate is the linear branch of the counter transfer function
    (K_neu * i); the per-spike energy keeps the exact oscillator terms,
    including the V_mem short-circuit pole at I_rst that pushes the optimum
    operating current below I_flx.
    """
    if not 0 < i_z_max < cfg.i_rst:
        raise ModelDomainError(
            f"i_z_max must lie in (0, i_rst); got {i_z_max!r} with i_rst={cfg.i_rst!r}"
        )
    k_neu = cfg.k_neu
    vdd = cfg.vdd

    def integrand(i: float) -> float:
        if i <= 0.0:
            # limit of (rate/f_sp)*alpha2_isc*VDD as i -> 0
            return consts.alpha2_isc * vdd * k_neu * cfg.c_b * vdd
        rate = k_neu * i
        f_sp = neuron_frequency(i, cfg)
        return (
            consts.alpha1 * vdd**2 * rate
            + consts.alpha2_isc * vdd * rate / f_sp
            + cfg.c_b * i * vdd**2 / (cfg.i_rst - i + cfg.i_lk) * rate
        )

    prefactor = 2**cfg.b / (0.75 * k_neu * i_z_max**2)
    # split near the I_rst pole so the adaptive rule converges fast
    split = min(i_z_max, 0.9 * cfg.i_rst)
    total = adaptive_simpson(integrand, 0.0, split, rel_tol=rel_tol)
    if split < i_z_max:
        total += adaptive_simpson(integrand, split, i_z_max, rel_tol=rel_tol)
    return prefactor * total


def energy_per_mac(
    p_total: float,
    rate: float,
    d: int,
    l: int,
    *,
    e_mult: float | None = None,
    n_mult: int | None = None,
) -> float:
    """Energy per multiply-accumulate: p_total/(rate*d*l).

    System mode (e_mult given) adds a per-classification second-stage term
    of n_mult digital multiplies; n_mult defaults to l.
    """
    if min(p_total, rate) <= 0 or d < 1 or l < 1:
        raise InputDomainError("power, rate, d and l must be positive")
    e = p_total / (rate * d * l)
    if e_mult is not None:
        e += (l if n_mult is None else n_mult) * e_mult / (d * l)
    return e


def thermal_voltage(delta_t: float, u_t0: float = 0.025, t0: float = NOMINAL_TEMPERATURE) -> float:
    """U_T scales linearly with absolute temperature."""
    return u_t0 * (t0 + delta_t) / t0


def temperature_weights(w: WeightMatrix, delta_t: float) -> WeightMatrix:
    """Recompute weights at T0 + delta_t reusing the stored dVt draws."""
    if abs(delta_t) > 60.0:
        raise ModelDomainError(f"temperature model valid for |delta_t| <= 60 K, got {delta_t!r}")
    u_t = thermal_voltage(delta_t, u_t0=w.u_t_used)
    return WeightMatrix(
        entries=np.exp(w.delta_vt / u_t),
        delta_vt=w.delta_vt.copy(),
        sigma_vt_used=w.sigma_vt_used,
        u_t_used=w.u_t_used,
        seed_used=w.seed_used,
    )


def energy_report(
    cfg: ChipConfig,
    consts: EnergyConstants,
    i_z_max: float,
    classification_rate: float,
    active_l: int | None = None,
) -> EnergyReport:
    """Operating-point summary; per-spike and supply figures at the average current."""
    l = cfg.l if active_l is None else active_l
    i_avg = i_z_max / 2.0
    p = power_vdd(l, neuron_frequency(i_avg, cfg), cfg, consts)
    return EnergyReport(
        e_sp=energy_per_spike(i_avg, cfg, consts),
        e_c=energy_per_conversion(i_z_max, cfg, consts),
        p_vdd=p,
        p_avdd=consts.p_avdd,
        pj_per_mac=energy_per_mac(p + consts.p_avdd, classification_rate, cfg.d, l) * 1e12,
    )
