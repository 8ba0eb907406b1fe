"""Circuit and bath parameters and the constants derived from them.

Internally every solver works in dimensionless units: time is measured in
units of 1/omega10, voltage in units of V0 = v0 * hbar*omega10/(2e), current in
units of G0*V0 and rates in units of omega10.  :func:`to_si` converts back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, UsageError

# CODATA 2018 exact values
E_CHARGE = 1.602176634e-19
H_PLANCK = 6.62607015e-34
HBAR = H_PLANCK / (2 * math.pi)
FLUX_QUANTUM = H_PLANCK / (2 * E_CHARGE)


@dataclass(frozen=True)
class SystemParams:
    """Circuit energies and drive/bath scales.

    Parameters
    ----------
    e_c : float
        Charging energy as a frequency E_C/(2*pi*hbar), in GHz.
    e_l_ratio : float
        Inductive energy in units of the charging energy, E_L/E_C.
    phi0 : float
        Static phase-bias offset in radians.
    v0_norm : float
        Drive amplitude 2 e V0 / (hbar omega10).
    s_qp_ratio : float
        Quasiparticle spectral density at the transition, S_qp(omega10)/omega10.
    """

    e_c: float = 1.0
    e_l_ratio: float = 1000.0
    phi0: float = math.pi / 2
    v0_norm: float = 1.0
    s_qp_ratio: float = 1.0

    def __post_init__(self):
        for name in ("e_c", "e_l_ratio", "phi0", "v0_norm", "s_qp_ratio"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.e_c <= 0:
            raise ParameterError("e_c must be positive")
        if self.e_l_ratio <= 0:
            raise ParameterError("e_l_ratio must be positive")
        if self.s_qp_ratio < 0:
            raise ParameterError("s_qp_ratio must be non-negative")
        if self.v0_norm < 0:
            raise ParameterError("v0_norm must be non-negative")


@dataclass(frozen=True)
class DerivedScales:
    """Constants derived from :class:`SystemParams` (SI where dimensional)."""

    omega10: float  # rad/s
    g0: float
    d0: float
    c_d: float  # F
    v0_si: float  # V
    g_norm: float  # S, the conductance unit G0
    p10: float  # P(g0, 1, 0)
    v0_norm: float
    s_qp_ratio: float

    @property
    def period(self):
        """Resonant drive period 2*pi/omega10 in seconds."""
        return 2 * math.pi / self.omega10


@dataclass(frozen=True)
class BathParams:
    """Quasiparticle bath properties used by the frequency-shift estimate.

    Parameters
    ----------
    gap : float
        Effective superconducting gap as a frequency Delta/h, in GHz.
    x_qp : float
        Quasiparticle density normalized to the Cooper-pair density.
    x_qp_a : float
        Energy-mode occupation at the gap.
    g_t : float
        Effective junction conductance in siemens.
    """

    gap: float
    x_qp: float = 0.0
    x_qp_a: float = 0.0
    g_t: float = 0.0

    def __post_init__(self):
        if not self.gap > 0:
            raise ParameterError("gap must be positive")
        if self.x_qp < 0:
            raise ParameterError("x_qp must be non-negative")
        if not 0 <= self.x_qp_a <= 1:
            raise ParameterError("x_qp_a must lie in [0, 1]")
        if self.g_t < 0:
            raise ParameterError("g_t must be non-negative")

    @property
    def gap_joule(self):
        return H_PLANCK * self.gap * 1e9


@dataclass(frozen=True)
class JunctionPair:
    """Normal conductances and gaps of the two dc-SQUID junctions."""

    g1: float
    g2: float
    delta1: float
    delta2: float

    def __post_init__(self):
        for name in ("g1", "g2", "delta1", "delta2"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")


def ground_spread(e_l_ratio):
    """Return (g0, d0) for a given E_L/E_C.

    g0 = (E_C / 32 E_L)^(1/4) is the phase zero-point amplitude entering the
    matrix elements, d0 = (2 E_L / E_C)^(1/4) the width of the oscillator
    eigenfunctions. Their product is exactly 1/2.
    """
    g0 = (1.0 / (32.0 * e_l_ratio)) ** 0.25
    d0 = (2.0 * e_l_ratio) ** 0.25
    return g0, d0


def derive_scales(p: SystemParams) -> DerivedScales:
    """Compute the transition frequency and every derived constant."""
    # imported lazily to keep params free of a hard specfun dependency at import time
    from .specfun import p_factor

    e_c_joule = H_PLANCK * p.e_c * 1e9
    omega10 = 2 * math.pi * p.e_c * 1e9 * math.sqrt(2.0 * p.e_l_ratio)
    g0, d0 = ground_spread(p.e_l_ratio)
    c_d = 2 * E_CHARGE**2 / e_c_joule
    v0_si = p.v0_norm * HBAR * omega10 / (2 * E_CHARGE)
    p10 = p_factor(g0, 1, 0)
    g_norm = p10 * p.s_qp_ratio * omega10 * c_d / 4
    return DerivedScales(
        omega10=omega10,
        g0=g0,
        d0=d0,
        c_d=c_d,
        v0_si=v0_si,
        g_norm=g_norm,
        p10=p10,
        v0_norm=p.v0_norm,
        s_qp_ratio=p.s_qp_ratio,
    )


@dataclass(frozen=True)
class EffectiveJunction:
    g_eff: float
    s_asym: float
    ab_consistent: bool


def effective_junction(j: JunctionPair, rtol=1e-6) -> EffectiveJunction:
    """Collapse a conductance-asymmetric SQUID into one effective junction.

    Returns the total leakage conductance, the asymmetry of the phase-dependent
    current, and whether G1/G2 = Delta2/Delta1 (equal critical currents under
    Ambegaokar-Baratoff) holds to ``rtol``.
    """
    total = j.g1 + j.g2
    if total == 0:
        raise ParameterError("g1 + g2 must be nonzero")
    s_asym = (j.g1 - j.g2) / total
    ab = math.isclose(j.g1 / j.g2, j.delta2 / j.delta1, rel_tol=rtol)
    return EffectiveJunction(g_eff=total, s_asym=s_asym, ab_consistent=ab)


_SI_FACTORS = {
    "time": lambda d: 1.0 / d.omega10,
    "voltage": lambda d: d.v0_si,
    "current": lambda d: d.g_norm * d.v0_si,
    "conductance": lambda d: d.g_norm,
    "rate": lambda d: d.omega10,
}


def to_si(d: DerivedScales, quantity: str, normalized_value):
    """Convert a dimensionless value back to SI.

    ``quantity`` is one of ``time``, ``voltage``, ``current``, ``conductance``
    or ``rate``.  Voltage is in units of V0 (equal to hbar*omega10/(2e) when
    ``v0_norm`` is 1), current in units of G0*V0 and conductance in units of G0.
    """
    try:
        factor = _SI_FACTORS[quantity](d)
    except KeyError:
        raise UsageError(
            f"unknown quantity {quantity!r}; expected one of {sorted(_SI_FACTORS)}"
        ) from None
    return np.multiply(normalized_value, factor)
