"""Validity estimates for the two-level master-equation treatment.

Adiabaticity of the phase drive, the quasiparticle-induced shift of the
transition frequency, and the strength of pure dephasing relative to
relaxation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DriveProtocol, drive_eval
from .params import E_CHARGE, HBAR, BathParams, DerivedScales, SystemParams, derive_scales
from .specfun import sin_half_element_sq


def adiabatic_param(p: SystemParams, d: DriveProtocol, tau):
    """Instantaneous adiabatic parameter |dphi_d/dtau| / d0."""
    _, d0 = _spread(p)
    _, dphi = drive_eval(d, tau)
    return np.abs(dphi) / d0


def _spread(p):
    s = derive_scales(p)
    return s.g0, s.d0


def max_adiabatic_param(p: SystemParams, d: DriveProtocol, samples=4096):
    """Largest adiabatic parameter over one drive period (sampled, endpoints included)."""
    if d.kind == "constant":
        return 0.0
    tau = np.linspace(0.0, 2 * math.pi / d.frequency_ratio, samples + 1)
    return float(np.max(adiabatic_param(p, d, tau)))


@dataclass(frozen=True)
class FrequencyShift:
    delta_omega: float  # rad/s
    relative: float  # |delta_omega| / omega10


def freq_shift(b: BathParams, scales: DerivedScales, phi_d):
    """Quasiparticle shift of the transition frequency in the high-frequency limit.

    delta_omega = -g0^2 (g_T Delta / e^2)
                  * [x_qp sqrt(2 Delta / (hbar omega10)) - 2 pi x_qp^A] sin^2(phi_d / 2)
    """
    gap = b.gap_joule
    bracket = b.x_qp * math.sqrt(2 * gap / (HBAR * scales.omega10)) - 2 * math.pi * b.x_qp_a
    dw = -scales.g0**2 * (b.g_t * gap / E_CHARGE**2) * bracket * np.sin(np.asarray(phi_d) / 2) ** 2
    if np.ndim(dw) == 0:
        dw = float(dw)
    return FrequencyShift(delta_omega=dw, relative=np.abs(dw) / scales.omega10)


def dephasing_strength(g0, phi_d):
    """|A_s^d|^2 = g0^4 exp(-g0^2) sin^2(phi_d/2) / 4."""
    return g0**4 * math.exp(-g0 * g0) * np.sin(np.asarray(phi_d) / 2) ** 2 / 4


def dephasing_to_relaxation(g0, phi_d):
    """|A_s^d|^2 / |<0|sin(phi/2)|1>|^2; NaN where the relaxation element vanishes."""
    num = dephasing_strength(g0, phi_d)
    den = sin_half_element_sq(g0, phi_d, 1, 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.asarray(den) > 1e-300, num / den, np.nan)


@dataclass
class DiagnosticsReport:
    alpha_max: float
    alpha_series: np.ndarray
    delta_omega_qp: float | None
    delta_omega_relative: float | None
    dephasing_strength: float
    ratio_dephasing_to_relax: float

    def to_dict(self):
        return {
            "alpha_max": self.alpha_max,
            "delta_omega_qp": self.delta_omega_qp,
            "delta_omega_relative": self.delta_omega_relative,
            "dephasing_strength": self.dephasing_strength,
            "ratio_dephasing_to_relax": self.ratio_dephasing_to_relax,
        }


def diagnose(p: SystemParams, d: DriveProtocol, tau, bath: BathParams | None = None):
    """Evaluate every estimate along the drive samples ``tau``.

    Shift and dephasing values are the largest magnitudes met along the drive;
    the dephasing-to-relaxation ratio is maximized over samples where the
    relaxation matrix element is nonzero.  The maximal adiabatic parameter is
    taken over a full drive period, independent of the sampling.
    """
    scales = derive_scales(p)
    tau = np.asarray(tau, dtype=float)
    phi, _ = drive_eval(d, tau)
    phi = np.atleast_1d(phi)
    alpha = np.atleast_1d(adiabatic_param(p, d, tau))
    dw = rel = None
    if bath is not None:
        shift = freq_shift(bath, scales, phi)
        k = int(np.argmax(np.abs(shift.delta_omega)))
        dw = float(np.atleast_1d(shift.delta_omega)[k])
        rel = float(np.atleast_1d(shift.relative)[k])
    deph = dephasing_strength(scales.g0, phi)
    ratio = dephasing_to_relaxation(scales.g0, phi)
    finite = ratio[np.isfinite(ratio)]
    return DiagnosticsReport(
        alpha_max=max_adiabatic_param(p, d),
        alpha_series=alpha,
        delta_omega_qp=dw,
        delta_omega_relative=rel,
        dephasing_strength=float(np.max(deph)),
        ratio_dephasing_to_relax=float(np.max(finite)) if finite.size else float("nan"),
    )
