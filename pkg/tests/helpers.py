"""Independent oracles and cached reference runs shared by the test modules.

Nothing here calls into the library's numerical kernels: each oracle is built
from a different representation (dense matrices, explicit series, adaptive
quadrature) so that agreement is meaningful.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate, linalg, special

from qmemristor import (
    DriveProtocol,
    InitialConditions,
    SolverSettings,
    SystemParams,
    memory_quantifier,
    simulate,
)

G0_REF = 0.0747674
N_LEVELS = 200


# -- special functions ------------------------------------------------------

def laguerre_series(n, k, x):
    """L_n^k(x) from the explicit finite sum, in exact rational arithmetic."""
    x = Fraction(x)
    total = sum(
        Fraction((-1) ** j * special.comb(n + k, n - j, exact=True), math.factorial(j)) * x**j
        for j in range(n + 1)
    )
    return float(total)


def ladder(levels):
    return np.diag(np.sqrt(np.arange(1, levels)), 1)


@lru_cache(maxsize=None)
def sin_half_dense(g0, phi_d, levels=N_LEVELS):
    """sin(phi/2) with phi = 2 g0 (a + a^dag) + phi_d, by eigendecomposition."""
    a = ladder(levels)
    phi = 2 * g0 * (a + a.T) + phi_d * np.eye(levels)
    w, vecs = np.linalg.eigh(phi)
    return (vecs * np.sin(w / 2)) @ vecs.T


def displacement_dense(alpha, levels=60):
    a = ladder(levels).astype(complex)
    return linalg.expm(alpha * a.conj().T - np.conj(alpha) * a)


# -- dynamics ---------------------------------------------------------------

def damping_exponent(s_qp, g0=None, phi0=math.pi / 2, v0=1.0, tau_end=20 * math.pi, form="sin2"):
    """E(tau_end) = integral of the damping rate, by adaptive quadrature."""
    if g0 is None:
        g0 = (1 / 32000) ** 0.25
    p = math.exp(-g0 * g0) * g0 * g0
    sign = -1.0 if form == "sin2" else 1.0

    def rate(t):
        return p * s_qp / 4 * (1 + sign * math.cos(phi0 + v0 * math.sin(t)))

    total = 0.0
    for k in range(int(round(tau_end / (2 * math.pi)))):
        total += integrate.quad(rate, 2 * math.pi * k, 2 * math.pi * (k + 1), epsabs=1e-14)[0]
    return total


def segment_distances(points, curve):
    """Distance from each point to the polyline ``curve`` (both (n, 2) arrays)."""
    a, b = curve[:-1], curve[1:]
    ab = b - a
    len2 = np.maximum(np.sum(ab * ab, axis=1), 1e-300)
    out = np.empty(len(points))
    for k, pt in enumerate(points):
        t = np.clip(np.sum((pt - a) * ab, axis=1) / len2, 0.0, 1.0)
        proj = a + t[:, None] * ab
        out[k] = np.sqrt(np.min(np.sum((proj - pt) ** 2, axis=1)))
    return out


# -- cached runs ------------------------------------------------------------

def setup(s_qp=1.0, preset="blue", form="sin2", model="memristor", v0=1.0, periods=10,
          steps=2000, kind="resonant_sinusoid"):
    p = SystemParams(s_qp_ratio=s_qp, v0_norm=v0)
    d = DriveProtocol.from_params(p, kind=kind)
    ic = InitialConditions.from_preset(preset)
    s = SolverSettings(periods=periods, steps_per_period=steps, memductance_form=form, model=model)
    return p, d, ic, s


@lru_cache(maxsize=None)
def run(s_qp=1.0, preset="blue", form="sin2", model="memristor", v0=1.0, periods=10, steps=2000):
    return simulate(*setup(s_qp, preset, form, model, v0, periods, steps))


@lru_cache(maxsize=None)
def report(s_qp=1.0, preset="blue", form="sin2", model="memristor", v0=1.0):
    return memory_quantifier(run(s_qp, preset, form, model, v0))


def amp_dev(a, b):
    """Max deviation normalized by the peak magnitude of the reference."""
    scale = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / scale) if scale > 0 else float(np.max(np.abs(a - b)))
