"""Pinched-hysteresis analysis: zero crossings, loop areas and memory quantifiers.

A loop is the stretch of the (v, i) trajectory between two consecutive
voltage zero crossings, so a resonant run of ``n`` periods yields ``2n - 1``
complete loops.  Each loop is closed because i vanishes with v.  Its area,
evaluated by Green's theorem as 1/2 * integral of v^2 d(gn), is the memory
quantifier N^k; a conductance depending on the instantaneous voltage only
gives N^k = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dynamics import (
    DriveProtocol,
    InitialConditions,
    SolverSettings,
    TimeSeries,
    simulate_classical,
    simulate_memristor,
)
from .errors import InsufficientDataError, UsageError
from .params import SystemParams

RATIO_FLOOR = 1e-12
AGREEMENT_RTOL = 0.005
ZERO_SNAP = 1e-12


def find_pinch_points(ts: TimeSeries) -> np.ndarray:
    """Times where the voltage crosses zero, by linear interpolation.

    Sign changes between samples are interpolated.  A sample that is zero
    (up to ``ZERO_SNAP`` times the peak |v|, which absorbs rounding noise at
    analytic zeros) counts as a crossing unless its neighbour is zero too, so
    an identically vanishing voltage has no crossings.
    """
    tau = ts.tau
    peak = float(np.max(np.abs(ts.v))) if len(ts.v) else 0.0
    v = np.where(np.abs(ts.v) <= ZERO_SNAP * peak, 0.0, ts.v)
    zero = v == 0.0
    isolated = zero.copy()
    isolated[1:] &= ~zero[:-1]
    isolated[:-1] &= ~zero[1:]
    out = list(tau[isolated])
    k = np.nonzero(v[:-1] * v[1:] < 0)[0]
    frac = v[k] / (v[k] - v[k + 1])
    out.extend(tau[k] + frac * (tau[k + 1] - tau[k]))
    return np.array(sorted(out))


def _require_loops(crossings):
    if len(crossings) < 2:
        raise InsufficientDataError(
            f"loop analysis needs at least 2 voltage zero crossings, found {len(crossings)}"
        )


def _segment(ts, tau_a, tau_b, *fields):
    """Samples strictly inside (tau_a, tau_b) with interpolated end points."""
    tau = ts.tau
    inside = (tau > tau_a) & (tau < tau_b)
    t = np.concatenate(([tau_a], tau[inside], [tau_b]))
    out = [t]
    for name in fields:
        y = getattr(ts, name) if isinstance(name, str) else name
        ends = np.interp([tau_a, tau_b], tau, y)
        out.append(np.concatenate(([ends[0]], y[inside], [ends[1]])))
    return out


def loop_area_shoelace(ts: TimeSeries, tau_a, tau_b, signed=False):
    """Area of the (v, i) polyline between two crossings.

    Shoelace sum of 1/2 (v di - i dv) over the polyline closed back to its
    first point.  Positive for counter-clockwise traversal when ``signed``.
    """
    _, x, y = _segment(ts, tau_a, tau_b, "v", "i")
    area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    return area if signed else abs(area)


def _integrate(ts, tau_a, tau_b, y):
    t, yy = _segment(ts, tau_a, tau_b, y)
    return float(np.trapezoid(yy, t)) if hasattr(np, "trapezoid") else float(np.trapz(yy, t))


def memory_density(ts: TimeSeries):
    """Return the integrand 1/2 v^2 d(gn)/dtau split into memory and explicit parts.

    The memory part is f * 1/2 v^2 * d(gn)/d<phi>; the explicit-time part is
    the remainder of the exact total derivative.
    """
    half_v2 = 0.5 * ts.v * ts.v
    total = half_v2 * ts.dgn
    memory = half_v2 * ts.dgn_dm * ts.f
    return total, memory, total - memory


@dataclass
class HysteresisReport:
    """Per-loop areas and memory quantifiers of one run.

    ``quantifiers`` keep their sign (orientation of traversal), while
    ``loop_areas`` and ``ratios`` are magnitudes.  ``classical_ref`` is the
    quantifier magnitude of the classically initialized weak-damping loop on
    the same grid, or ``None`` when that reference is undefined for the drive.
    """

    crossings: np.ndarray
    loop_areas: np.ndarray
    quantifiers: np.ndarray
    memory_part: np.ndarray
    explicit_part: np.ndarray
    classical_ref: float | None
    ratios: np.ndarray = field(default_factory=lambda: np.array([]))

    @property
    def n_loops(self):
        return len(self.quantifiers)

    @property
    def agreement_errors(self):
        """Relative mismatch between the quantifier and the shoelace area per loop."""
        denom = np.maximum(self.loop_areas, RATIO_FLOOR)
        return np.abs(np.abs(self.quantifiers) - self.loop_areas) / denom

    def to_dict(self):
        return {
            "crossings": self.crossings.tolist(),
            "loop_areas": self.loop_areas.tolist(),
            "quantifiers": self.quantifiers.tolist(),
            "memory_part": self.memory_part.tolist(),
            "explicit_part": self.explicit_part.tolist(),
            "classical_ref": self.classical_ref,
            "ratios": self.ratios.tolist(),
        }


def loop_quantifiers(ts: TimeSeries, crossings=None):
    """Quantifier, memory part and explicit part for every loop of ``ts``."""
    if crossings is None:
        crossings = find_pinch_points(ts)
    _require_loops(crossings)
    total, memory, explicit = memory_density(ts)
    rows = []
    for a, b in zip(crossings[:-1], crossings[1:]):
        rows.append((
            _integrate(ts, a, b, total),
            _integrate(ts, a, b, memory),
            _integrate(ts, a, b, explicit),
        ))
    return np.array(rows).reshape(-1, 3)


def classical_reference(p: SystemParams, d: DriveProtocol, s: SolverSettings):
    """Quantifier magnitude of the first loop of the classical limit, or None."""
    try:
        ts = simulate_classical(p, d, InitialConditions.from_preset("blue"), s)
    except UsageError:
        return None
    return abs(float(loop_quantifiers(ts)[0, 0]))


def memory_quantifier(ts: TimeSeries) -> HysteresisReport:
    """Loop areas, quantifiers and ratios to the classical reference."""
    crossings = find_pinch_points(ts)
    q = loop_quantifiers(ts, crossings)
    areas = np.array([
        loop_area_shoelace(ts, a, b) for a, b in zip(crossings[:-1], crossings[1:])
    ])
    ref = classical_reference(ts.params, ts.drive, ts.settings)
    ratios = np.abs(q[:, 0]) / max(ref, RATIO_FLOOR) if ref is not None else np.array([])
    return HysteresisReport(
        crossings=crossings,
        loop_areas=areas,
        quantifiers=q[:, 0],
        memory_part=q[:, 1],
        explicit_part=q[:, 2],
        classical_ref=ref,
        ratios=ratios,
    )


@dataclass(frozen=True)
class SweepSpec:
    """Spectral-density sweep around a base configuration.

    ``log10_s_values`` are the values of log10(S_qp(omega10)/omega10); every
    other setting is taken from the base configuration.
    """

    log10_s_values: tuple
    periods: int = 10
    params: SystemParams = field(default_factory=SystemParams)
    drive: DriveProtocol | None = None
    ic: InitialConditions = field(default_factory=InitialConditions)
    settings: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        values = tuple(float(x) for x in self.log10_s_values)
        if not values:
            raise UsageError("sweep needs at least one log10_s value")
        if list(values) != sorted(values):
            raise UsageError("log10_s values must be sorted ascending")
        object.__setattr__(self, "log10_s_values", values)


@dataclass(frozen=True)
class SweepRow:
    log10_s: float
    i_ratio: float
    v_ratio: float


def _period_window(ts, last):
    d = ts.drive
    period = 2 * math.pi / (d.frequency_ratio if d.kind == "resonant_sinusoid" else 1.0)
    if last:
        return ts.tau >= ts.tau[-1] - period - 1e-12
    return ts.tau <= period + 1e-12


def decay_ratios(ts: TimeSeries):
    """Current and voltage decay over a run.

    ``i_ratio`` compares the largest |i| in the last drive period with the
    first; ``v_ratio`` is the coherence-amplitude envelope at the end of the
    run relative to its start, |z(end)| / |z(0)|.
    """
    first = _period_window(ts, last=False)
    last = _period_window(ts, last=True)
    i_first = np.max(np.abs(ts.i[first]))
    i_ratio = float(np.max(np.abs(ts.i[last])) / i_first) if i_first > 0 else float("nan")
    amp = np.hypot(ts.u, ts.v)
    v_ratio = float(amp[-1] / amp[0]) if amp[0] > 0 else float("nan")
    return i_ratio, v_ratio


def sweep_sqp(spec: SweepSpec):
    """One memristor run per spectral density; returns a list of :class:`SweepRow`."""
    settings = replace(spec.settings, periods=spec.periods, model="memristor")
    rows = []
    for log_s in spec.log10_s_values:
        p = replace(spec.params, s_qp_ratio=10.0**log_s)
        d = spec.drive if spec.drive is not None else DriveProtocol.from_params(p)
        ts = simulate_memristor(p, d, spec.ic, settings)
        i_ratio, v_ratio = decay_ratios(ts)
        rows.append(SweepRow(log_s, i_ratio, v_ratio))
    return rows
