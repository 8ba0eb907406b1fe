"""Time-domain solvers for the phase-driven quasiparticle memristor.

All quantities are dimensionless: tau = omega10 t, v = <V>/V0, the output
current i = <I_qp>/(G0 V0), the damping rate g = G_qp/(C_d omega10) and the
decay rate gamma = Gamma_{1->0}/omega10.

The two-level coherence is carried as an unnormalized complex amplitude
``z = u + i v``, where ``v`` is the normalized voltage and ``v0 * u`` the
inductive phase.  The memristor equations are linear in the coherence, so
every normalized output is independent of its absolute scale.

Four models are provided:

``oracle``
    integrates dz/dtau = (i - g(tau)) z with the damping taken from the drive
    alone, since <phi> - <phi_ind> = phi_d holds as an operator identity.
``memristor``
    integrates the memory variable <phi> with the update function and the
    damping exponent, and rebuilds voltage, inductive phase and memductance
    from them.  It never uses the identity above, which is then checked.
``classical``
    the weak-damping limit with the Josephson relation driving phi_d.
``nonlinear_baseline``
    a memoryless conductor i = g(v) v, for which every loop area vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConsistencyError, NumericalError, ParameterError, UsageError
from .params import (
    E_CHARGE,
    HBAR,
    H_PLANCK,
    DerivedScales,
    SystemParams,
    derive_scales,
)
from .specfun import decay_rate, p_factor

DRIVE_KINDS = ("resonant_sinusoid", "constant")
PRESETS = {"blue": (1.0, 0.0), "red": (0.0, 1.0), "black": (1.0, 1.0)}
FORMS = ("sin2", "cos2")
MODELS = ("oracle", "memristor", "classical", "nonlinear_baseline")

RESIDUAL_LIMIT = 1e-4


@dataclass(frozen=True)
class DriveProtocol:
    """External phase bias phi_d(tau).

    ``resonant_sinusoid`` is phi0 + amplitude * sin(frequency_ratio * tau);
    ``constant`` holds phi0.
    """

    kind: str = "resonant_sinusoid"
    phi0: float = math.pi / 2
    amplitude: float = 1.0
    frequency_ratio: float = 1.0

    def __post_init__(self):
        if self.kind not in DRIVE_KINDS:
            raise UsageError(f"unknown drive kind {self.kind!r}")
        if self.kind == "resonant_sinusoid" and not self.frequency_ratio > 0:
            raise ParameterError("frequency_ratio must be positive")

    @classmethod
    def from_params(cls, p: SystemParams, kind="resonant_sinusoid", frequency_ratio=1.0):
        return cls(kind=kind, phi0=p.phi0, amplitude=p.v0_norm, frequency_ratio=frequency_ratio)


def drive_eval(d: DriveProtocol, tau):
    """Return ``(phi_d, dphi_d/dtau)`` at ``tau`` (scalar or array)."""
    tau = np.asarray(tau, dtype=float)
    if d.kind == "constant":
        phi = np.full_like(tau, d.phi0)
        dphi = np.zeros_like(tau)
    else:
        w = d.frequency_ratio
        phi = d.phi0 + d.amplitude * np.sin(w * tau)
        dphi = d.amplitude * w * np.cos(w * tau)
    if tau.ndim == 0:
        return float(phi), float(dphi)
    return phi, dphi


@dataclass(frozen=True)
class InitialConditions:
    """Initial voltage and inductive-phase offset.

    ``v_init`` is <V>(0)/V0 and ``u_init`` the inductive phase at t=0 in units
    of v0, i.e. (<phi>(0) - phi_d(0)) e / (4 g0^2 V0 C_d).  Together they fix
    the initial coherence amplitude z(0) = u_init + 1j * v_init.
    """

    v_init: float = 1.0
    u_init: float = 0.0
    preset: str = "blue"

    def __post_init__(self):
        if self.preset in PRESETS:
            if (self.v_init, self.u_init) != PRESETS[self.preset]:
                raise UsageError(
                    f"preset {self.preset!r} fixes (v, u) = {PRESETS[self.preset]}"
                )
        elif self.preset != "custom":
            raise UsageError(f"unknown preset {self.preset!r}")

    @classmethod
    def from_preset(cls, name):
        if name not in PRESETS:
            raise UsageError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
        v, u = PRESETS[name]
        return cls(v_init=v, u_init=u, preset=name)

    @classmethod
    def custom(cls, v_init, u_init):
        return cls(v_init=float(v_init), u_init=float(u_init), preset="custom")

    @property
    def z0(self):
        return complex(self.u_init, self.v_init)


@dataclass(frozen=True)
class SolverSettings:
    periods: int = 10
    steps_per_period: int = 2000
    memductance_form: str = "sin2"
    model: str = "memristor"

    def __post_init__(self):
        if self.periods < 1:
            raise ParameterError("periods must be >= 1")
        if self.steps_per_period < 64:
            raise ParameterError("steps_per_period must be >= 64")
        if self.memductance_form not in FORMS:
            raise UsageError(f"unknown memductance form {self.memductance_form!r}")
        if self.model not in MODELS:
            raise UsageError(f"unknown model {self.model!r}")

    @property
    def dtau(self):
        return 2 * math.pi / self.steps_per_period

    @property
    def n_steps(self):
        return self.periods * self.steps_per_period

    def grid(self):
        return np.arange(self.n_steps + 1) * self.dtau


@dataclass(eq=False)
class TimeSeries:
    """Uniformly sampled trajectory.

    Attributes
    ----------
    tau, phi_d, dphi_d : ndarray
        Time grid, drive phase and its tau-derivative.
    v, dv : ndarray
        Normalized voltage and its tau-derivative.
    u : ndarray
        Inductive phase in units of v0 (real part of the coherence amplitude).
    i : ndarray
        Normalized quasiparticle current, i = gn * v.
    m, phi_ind : ndarray
        Mean phase <phi> (the memory variable) and mean inductive phase, in rad.
    f : ndarray
        Memory-variable velocity d<phi>/dtau.
    g : ndarray
        Memductance in units of C_d omega10 (the voltage damping rate).
    gn, dgn, dgn_dm : ndarray
        Memductance in units of G0, its total tau-derivative, and its partial
        derivative with respect to the memory variable.
    gamma : ndarray
        Relaxation rate Gamma_{1->0}/omega10.
    E : ndarray
        Damping exponent, the running integral of g.
    residual : ndarray
        (m - phi_ind) - phi_d.
    """

    tau: np.ndarray
    phi_d: np.ndarray
    dphi_d: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    u: np.ndarray
    i: np.ndarray
    m: np.ndarray
    phi_ind: np.ndarray
    f: np.ndarray
    g: np.ndarray
    gn: np.ndarray
    dgn: np.ndarray
    dgn_dm: np.ndarray
    gamma: np.ndarray
    E: np.ndarray
    residual: np.ndarray
    params: SystemParams = field(default_factory=SystemParams)
    drive: DriveProtocol = field(default_factory=DriveProtocol)
    ic: InitialConditions = field(default_factory=InitialConditions)
    settings: SolverSettings = field(default_factory=SolverSettings)

    def __len__(self):
        return len(self.tau)

    @property
    def max_residual(self):
        return float(np.max(np.abs(self.residual)))


def _form_sign(form):
    if form not in FORMS:
        raise UsageError(f"unknown memductance form {form!r}")
    return 1.0 if form == "sin2" else -1.0


def memductance(g0, s_qp, m, phi_ind, form="sin2"):
    """Quasiparticle memductance in units of C_d omega10.

    ``sin2``: (P s/4)(1 - cos(m - phi_ind)), i.e. P s/2 * sin^2((m - phi_ind)/2).
    ``cos2``: (P s/4)(1 + cos(m - phi_ind)), which is Gamma_{1->0}/2 and thus
    the coherence decay rate of the Lindblad equation.
    """
    sign = _form_sign(form)
    scale = p_factor(g0, 1, 0) * s_qp / 4.0
    return scale * (1.0 - sign * np.cos(np.subtract(m, phi_ind)))


def phi_ind_regularized(v, dv_dtau, g, v0):
    """Mean inductive phase (rad) from the voltage record.

    The logarithmic derivative of the voltage-to-free-oscillation ratio equals
    -g, so the inductive phase is v0 * (dv/dtau + g v); no division by v.
    """
    return v0 * (np.asarray(dv_dtau) + np.asarray(g) * np.asarray(v))


def update_f(v, dv_dtau, g, dphi_d, v0):
    """Memory-variable velocity d<phi>/dtau.

    f = v0 * (-g dv/dtau - g^2 v) - v0 v + dphi_d/dtau, which equals
    d(phi_ind + phi_d)/dtau along any solution.
    """
    v = np.asarray(v)
    g = np.asarray(g)
    return -v0 * (g * np.asarray(dv_dtau) + g * g * v + v) + dphi_d


def _normalized_memductance(x, dx, form, enabled=True):
    """Memductance in units of G0 plus its derivatives, for phase difference x."""
    sign = _form_sign(form)
    if not enabled:
        zero = np.zeros_like(x)
        return zero, zero, zero
    gn = 1.0 - sign * np.cos(x)
    dgn_dx = sign * np.sin(x)
    return gn, dgn_dx * dx, dgn_dx


def _check_finite(arrays, what):
    bad = np.zeros(len(arrays[0]), dtype=bool)
    for a in arrays:
        bad |= ~np.isfinite(a)
    if bad.any():
        raise NumericalError(f"{what} produced a non-finite value", int(np.argmax(bad)))


def _finish(tau, phi_d, dphi_d, v, dv, u, m, phi_ind, g, E, scales, p, d, ic, s, f=None):
    """Fill derived fields shared by the quantum solvers."""
    v0 = p.v0_norm
    x = m - phi_ind
    g_scale = scales.p10 * p.s_qp_ratio / 4.0
    # along any solution d(m - phi_ind)/dtau = f - dphi_ind/dtau = dphi_d/dtau exactly
    gn, dgn, dgn_dm = _normalized_memductance(x, dphi_d, s.memductance_form, enabled=g_scale > 0)
    if f is None:
        f = update_f(v, dv, g, dphi_d, v0)
    return TimeSeries(
        tau=tau,
        phi_d=phi_d,
        dphi_d=dphi_d,
        v=v,
        dv=dv,
        u=u,
        i=gn * v,
        m=m,
        phi_ind=phi_ind,
        f=f,
        g=g,
        gn=gn,
        dgn=dgn,
        dgn_dm=dgn_dm,
        gamma=decay_rate(scales.g0, phi_d, p.s_qp_ratio),
        E=E,
        residual=x - phi_d,
        params=p,
        drive=d,
        ic=ic,
        settings=s,
    )


def _trapezoid_cumulative(y, h):
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * h * (y[1:] + y[:-1]), out=out[1:])
    return out


def simulate_oracle(p: SystemParams, d: DriveProtocol, ic: InitialConditions,
                    s: SolverSettings) -> TimeSeries:
    """Damped coherence amplitude, dz/dtau = (i - g(tau)) z, by fixed-step RK4.

    The equation is linear, so each RK4 step is multiplication by a complex
    amplification factor built from g at the step start, midpoint and end.
    """
    s = replace(s, model="oracle")
    scales = derive_scales(p)
    h = s.dtau
    n = s.n_steps
    tau = s.grid()
    half = np.arange(2 * n + 1) * (h / 2)
    phi_half, _ = drive_eval(d, half)
    g_half = memductance(scales.g0, p.s_qp_ratio, phi_half, 0.0, s.memductance_form)
    a = 1j - g_half
    a1, a2, a3 = a[0:-1:2], a[1::2], a[2::2]
    z = np.empty(n + 1, dtype=complex)
    z[0] = ic.z0
    # overflow shows up as non-finite samples and is reported below with its step
    with np.errstate(over="ignore", invalid="ignore"):
        c1 = a1
        c2 = a2 * (1 + 0.5 * h * c1)
        c3 = a2 * (1 + 0.5 * h * c2)
        c4 = a3 * (1 + h * c3)
        amp = 1 + (h / 6) * (c1 + 2 * c2 + 2 * c3 + c4)
        z[1:] = ic.z0 * np.cumprod(amp)
    _check_finite([z.real, z.imag], "oracle")

    phi_d, dphi_d = drive_eval(d, tau)
    g = g_half[::2]
    v = z.imag
    u = z.real
    dv = u - g * v
    phi_ind = p.v0_norm * u
    m = phi_d + phi_ind
    E = _trapezoid_cumulative(g, h)
    return _finish(tau, phi_d, dphi_d, v, dv, u, m, phi_ind, g, E, scales, p, d, ic, s)


def simulate_memristor(p: SystemParams, d: DriveProtocol, ic: InitialConditions,
                       s: SolverSettings) -> TimeSeries:
    """Self-consistent memristor form: RK4 on the memory variable and damping exponent.

    The state is (m, E) with m = <phi>.  At each stage the voltage follows
    from the damped free oscillation v = exp(-E) Im(z0 e^{i tau}), the
    inductive phase from :func:`phi_ind_regularized`, the memductance from
    ``m - phi_ind``, and m advances with :func:`update_f`.
    """
    s = replace(s, model="memristor")
    scales = derive_scales(p)
    h = s.dtau
    n = s.n_steps
    v0 = p.v0_norm
    sign = _form_sign(s.memductance_form)
    g_scale = scales.p10 * p.s_qp_ratio / 4.0
    zr, zi = ic.u_init, ic.v_init

    half = np.arange(2 * n + 1) * (h / 2)
    phi_half, dphi_half = drive_eval(d, half)
    # free oscillation z0 e^{i tau} = wp + i w
    cos_h, sin_h = np.cos(half), np.sin(half)
    w_half = (zr * sin_h + zi * cos_h).tolist()
    wp_half = (zr * cos_h - zi * sin_h).tolist()
    dphi_half = dphi_half.tolist()
    exp = math.exp
    cos = math.cos

    def rhs(k, m, E):
        env = exp(-E)
        v = env * w_half[k]
        # dv/dtau + g v is the undamped derivative, so phi_ind does not need g
        dv_free = env * wp_half[k]
        phi_ind = v0 * dv_free
        g = g_scale * (1.0 - sign * cos(m - phi_ind))
        dv = dv_free - g * v
        f = -v0 * (g * dv + g * g * v + v) + dphi_half[k]
        return f, g

    m_arr = np.empty(n + 1)
    E_arr = np.empty(n + 1)
    m = float(phi_half[0]) + v0 * zr
    E = 0.0
    m_arr[0], E_arr[0] = m, E
    for k in range(n):
        j = 2 * k
        f1, g1 = rhs(j, m, E)
        f2, g2 = rhs(j + 1, m + 0.5 * h * f1, E + 0.5 * h * g1)
        f3, g3 = rhs(j + 1, m + 0.5 * h * f2, E + 0.5 * h * g2)
        f4, g4 = rhs(j + 2, m + h * f3, E + h * g3)
        m += h / 6 * (f1 + 2 * f2 + 2 * f3 + f4)
        E += h / 6 * (g1 + 2 * g2 + 2 * g3 + g4)
        m_arr[k + 1] = m
        E_arr[k + 1] = E
    _check_finite([m_arr, E_arr], "memristor solver")

    tau = s.grid()
    phi_d, dphi_d = drive_eval(d, tau)
    env = np.exp(-E_arr)
    w = np.asarray(w_half[::2])
    wp = np.asarray(wp_half[::2])
    v = env * w
    phi_ind_free = v0 * env * wp
    g = memductance(scales.g0, p.s_qp_ratio, m_arr, phi_ind_free, s.memductance_form)
    dv = env * wp - g * v
    phi_ind = phi_ind_regularized(v, dv, g, v0)
    f = update_f(v, dv, g, dphi_d, v0)
    # u is the inductive phase in units of v0; fall back to the envelope form when v0 = 0
    u = phi_ind / v0 if v0 > 0 else env * wp
    ts = _finish(tau, phi_d, dphi_d, v, dv, u, m_arr, phi_ind, g, E_arr, scales, p, d, ic, s, f=f)
    if ts.max_residual > RESIDUAL_LIMIT:
        raise ConsistencyError(
            f"self-consistency residual {ts.max_residual:.3e} rad exceeds {RESIDUAL_LIMIT}",
            ts.max_residual,
        )
    return ts


def _require_classical_setup(d: DriveProtocol, ic: InitialConditions):
    if (ic.v_init, ic.u_init) != PRESETS["blue"]:
        raise UsageError("the classical limit is defined for the blue initialization only")
    if d.kind != "resonant_sinusoid" or d.frequency_ratio != 1.0:
        raise UsageError("the classical limit requires a resonant sinusoidal drive")


def simulate_classical(p: SystemParams, d: DriveProtocol, ic: InitialConditions,
                       s: SolverSettings) -> TimeSeries:
    """Weak-damping limit: v = cos tau and phi_d from the Josephson relation.

    phi_d is integrated with RK4 from dphi_d/dtau = amplitude * v starting at
    phi0.  The current is i = (1 -+ cos phi_d) v and no damping acts.
    """
    _require_classical_setup(d, ic)
    s = replace(s, model="classical")
    scales = derive_scales(p)
    h = s.dtau
    n = s.n_steps
    tau = s.grid()
    half = np.arange(2 * n + 1) * (h / 2)
    rate = d.amplitude * np.cos(half)
    # time-only right-hand side: RK4 reduces to Simpson's rule per step
    incr = h / 6 * (rate[0:-1:2] + 4 * rate[1::2] + rate[2::2])
    phi_d = np.empty(n + 1)
    phi_d[0] = d.phi0
    np.cumsum(incr, out=phi_d[1:])
    phi_d[1:] += d.phi0
    v = np.cos(tau)
    dv = -np.sin(tau)
    dphi_d = d.amplitude * v
    u = -np.sin(tau)
    phi_ind = p.v0_norm * u
    m = phi_d + phi_ind
    g_scale = scales.p10 * p.s_qp_ratio / 4.0
    gn, dgn, dgn_dm = _normalized_memductance(phi_d, dphi_d, s.memductance_form)
    return TimeSeries(
        tau=tau,
        phi_d=phi_d,
        dphi_d=dphi_d,
        v=v,
        dv=dv,
        u=u,
        i=gn * v,
        m=m,
        phi_ind=phi_ind,
        f=update_f(v, dv, 0.0, dphi_d, p.v0_norm),
        g=g_scale * gn,
        gn=gn,
        dgn=dgn,
        dgn_dm=dgn_dm,
        gamma=decay_rate(scales.g0, phi_d, p.s_qp_ratio),
        E=np.zeros_like(tau),
        residual=(m - phi_ind) - phi_d,
        params=p,
        drive=d,
        ic=ic,
        settings=s,
    )


def simulate_nonlinear_baseline(p: SystemParams, d: DriveProtocol, ic: InitialConditions,
                                s: SolverSettings, g_a=None, g_b=1.0,
                                conductance=None) -> TimeSeries:
    """Memoryless conductor driven by the undamped voltage v = Im(z0 e^{i tau}).

    The conductance, in units of C_d omega10, is g(v) = g_a (1 + g_b v^2)
    with g_a = P(g0,1,0)/4 by default.  ``conductance`` may instead be a
    callable returning ``(g, dg/dv)`` for an array of voltages.  The current
    is normalized with G0, so ``s_qp_ratio`` must be positive.
    """
    s = replace(s, model="nonlinear_baseline")
    scales = derive_scales(p)
    g_scale = scales.p10 * p.s_qp_ratio / 4.0
    if g_scale <= 0:
        raise ParameterError("the baseline needs s_qp_ratio > 0 to define the current unit")
    tau = s.grid()
    z = ic.z0 * np.exp(1j * tau)
    v, u = z.imag, z.real
    dv = u.copy()
    if conductance is None:
        if g_a is None:
            g_a = scales.p10 / 4.0
        g = g_a * (1.0 + g_b * v * v)
        dg_dv = 2.0 * g_a * g_b * v
    else:
        g, dg_dv = conductance(v)
        g = np.asarray(g, dtype=float) * np.ones_like(v)
        dg_dv = np.asarray(dg_dv, dtype=float) * np.ones_like(v)
    phi_d, dphi_d = drive_eval(d, tau)
    phi_ind = p.v0_norm * u
    m = phi_d + phi_ind
    gn = g / g_scale
    return TimeSeries(
        tau=tau,
        phi_d=phi_d,
        dphi_d=dphi_d,
        v=v,
        dv=dv,
        u=u,
        i=gn * v,
        m=m,
        phi_ind=phi_ind,
        f=update_f(v, dv, 0.0, dphi_d, p.v0_norm),
        g=g,
        gn=gn,
        dgn=dg_dv * dv / g_scale,
        dgn_dm=np.zeros_like(tau),
        gamma=decay_rate(scales.g0, phi_d, p.s_qp_ratio),
        E=np.zeros_like(tau),
        residual=np.zeros_like(tau),
        params=p,
        drive=d,
        ic=ic,
        settings=s,
    )


_SOLVERS = {
    "oracle": simulate_oracle,
    "memristor": simulate_memristor,
    "classical": simulate_classical,
    "nonlinear_baseline": simulate_nonlinear_baseline,
}


def simulate(p, d, ic, s: SolverSettings) -> TimeSeries:
    """Dispatch on ``s.model``."""
    return _SOLVERS[s.model](p, d, ic, s)


@dataclass(frozen=True)
class Currents:
    """Charging, inductive and quasiparticle currents per sample.

    ``unit`` is the SI current (A) that one normalized unit stands for: G0 V0
    when the bath coupling is nonzero, otherwise C_d omega10 V0.
    """

    i_ch: np.ndarray
    i_ind: np.ndarray
    i_qp: np.ndarray
    unit: float

    @property
    def total(self):
        return self.i_ch + self.i_ind + self.i_qp


def currents(ts: TimeSeries, scales: DerivedScales | None = None) -> Currents:
    """Split the junction current into charging, inductive and quasiparticle parts.

    Evaluated in SI from the recorded voltage derivative, inductive phase and
    memductance, then normalized:

    * I_ch = -2e d<n>/dt = C_d d<V>/dt
    * I_ind = -(2e/hbar) E_L <phi_ind>
    * I_qp = G_qp <V>

    Current conservation requires the three to sum to zero.
    """
    if ts.settings.model not in ("oracle", "memristor"):
        raise UsageError("currents are defined for the oracle and memristor models")
    p = ts.params
    if scales is None:
        scales = derive_scales(p)
    if scales.v0_si <= 0:
        raise ParameterError("currents need a nonzero voltage scale (v0_norm > 0)")
    e_l = H_PLANCK * p.e_c * 1e9 * p.e_l_ratio
    omega = scales.omega10
    v0_si = scales.v0_si
    i_ch = scales.c_d * omega * v0_si * ts.dv
    i_ind = -(2 * E_CHARGE / HBAR) * e_l * ts.phi_ind
    i_qp = ts.g * scales.c_d * omega * v0_si * ts.v
    unit = scales.g_norm * v0_si if scales.g_norm > 0 else scales.c_d * omega * v0_si
    return Currents(i_ch=i_ch / unit, i_ind=i_ind / unit, i_qp=i_qp / unit, unit=unit)
