import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import G0_REF, amp_dev, damping_exponent, run, setup
from qmemristor import (
    DriveProtocol,
    InitialConditions,
    NumericalError,
    ParameterError,
    SolverSettings,
    SystemParams,
    UsageError,
    currents,
    drive_eval,
    loop_area_shoelace,
    memductance,
    phi_ind_regularized,
    simulate,
    simulate_classical,
    simulate_memristor,
    simulate_nonlinear_baseline,
    simulate_oracle,
    update_f,
)
from qmemristor.analysis import find_pinch_points

PRESETS = ("blue", "red", "black")
S_VALUES = (0.0, 1e-4, 1e-2, 1.0)


# -- building blocks ----------------------------------------------------------

def test_drive_eval():
    d = DriveProtocol()
    assert drive_eval(d, 0.0) == (math.pi / 2, 1.0)
    phi, dphi = drive_eval(d, math.pi / 2)
    assert phi == pytest.approx(math.pi / 2 + 1) and dphi == pytest.approx(0.0, abs=1e-15)
    const = DriveProtocol(kind="constant", phi0=0.3)
    phi, dphi = drive_eval(const, np.linspace(0, 10, 5))
    assert np.all(phi == 0.3) and np.all(dphi == 0.0)


def test_drive_rejects():
    with pytest.raises(UsageError):
        DriveProtocol(kind="square")
    with pytest.raises(ParameterError):
        DriveProtocol(frequency_ratio=0.0)


def test_initial_conditions():
    assert InitialConditions.from_preset("red").z0 == 1 + 0j
    assert InitialConditions.from_preset("black").z0 == 1 + 1j
    with pytest.raises(UsageError):
        InitialConditions.from_preset("green")
    with pytest.raises(UsageError):
        InitialConditions(v_init=0.5, u_init=0.0, preset="blue")


def test_solver_settings_rejects():
    with pytest.raises(ParameterError):
        SolverSettings(periods=0)
    with pytest.raises(ParameterError):
        SolverSettings(steps_per_period=32)
    with pytest.raises(UsageError):
        SolverSettings(memductance_form="tan2")
    with pytest.raises(UsageError):
        SolverSettings(model="lumped")


def test_memductance_values():
    assert memductance(G0_REF, 0.0, 1.2, 0.1) == 0.0
    assert memductance(G0_REF, 1.0, math.pi / 2, 0.0) == pytest.approx(0.00138975, abs=5e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(-10, 10), st.floats(0.0, 5.0))
def test_memductance_reflection(x, s_qp):
    a = memductance(G0_REF, s_qp, x, 0.0, "sin2")
    b = memductance(G0_REF, s_qp, math.pi - x, 0.0, "cos2")
    assert a == pytest.approx(b, rel=1e-9, abs=1e-15)


def test_inductive_phase_weak_damping():
    assert phi_ind_regularized(1.0, 0.0, 0.0, 1.0) == 0.0
    tau = math.pi / 2
    assert phi_ind_regularized(math.cos(tau), -math.sin(tau), 0.0, 1.0) == pytest.approx(-1.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-3, 3), st.floats(0, 3))
def test_update_f_weak_damping(v, dv, dphi, v0):
    assert update_f(v, dv, 0.0, dphi, v0) + v0 * v - dphi == pytest.approx(0.0, abs=1e-12)


# -- reference trajectories ---------------------------------------------------

def test_undamped_rotation():
    ts = run(s_qp=0.0)
    assert np.max(np.abs(ts.v - np.cos(ts.tau))) < 1e-9
    assert np.all(ts.i == 0.0)
    assert len(ts) == 20001


def test_weak_damping_retrieves_cosine():
    ts = run(s_qp=1e-4)
    assert np.max(np.abs(ts.v - np.cos(ts.tau))) < 1e-3


def test_strong_damping_envelope():
    ts = run(s_qp=1.0)
    ratio = math.exp(-ts.E[-1])
    assert ratio == pytest.approx(0.916, abs=0.005)
    assert ratio == pytest.approx(math.exp(-damping_exponent(1.0)), rel=1e-8)
    assert abs(ts.v[-1]) == pytest.approx(ratio, rel=1e-8)


@pytest.mark.parametrize("preset", PRESETS)
@pytest.mark.parametrize("s_qp", S_VALUES)
def test_oracle_equivalence(preset, s_qp):
    mem = run(s_qp=s_qp, preset=preset)
    orc = run(s_qp=s_qp, preset=preset, model="oracle")
    for name in ("v", "i", "phi_ind"):
        assert amp_dev(getattr(mem, name), getattr(orc, name)) < 1e-6, name
    assert mem.max_residual < 1e-6
    np.testing.assert_allclose(mem.phi_ind, orc.u * mem.params.v0_norm, atol=1e-9)


@pytest.mark.parametrize("preset", PRESETS)
def test_oracle_equivalence_cos2(preset):
    mem = run(preset=preset, form="cos2")
    orc = run(preset=preset, form="cos2", model="oracle")
    assert amp_dev(mem.v, orc.v) < 1e-6 and amp_dev(mem.i, orc.i) < 1e-6


def test_envelope_matches_oracle_modulus():
    mem = run(s_qp=1.0, preset="black")
    orc = run(s_qp=1.0, preset="black", model="oracle")
    z0 = abs(mem.ic.z0)
    assert np.max(np.abs(z0 * np.exp(-mem.E) - np.hypot(orc.u, orc.v))) < 1e-8


def test_rk4_fourth_order():
    finals = {}
    for steps in (250, 500, 1000, 8000):
        p, d, ic, s = setup(s_qp=1.0, steps=steps, periods=2)
        ts = simulate_oracle(p, d, ic, s)
        finals[steps] = complex(ts.u[-1], ts.v[-1])
    e1 = abs(finals[250] - finals[8000])
    e2 = abs(finals[500] - finals[8000])
    e3 = abs(finals[1000] - finals[8000])
    assert 12 < e1 / e2 < 20 and 12 < e2 / e3 < 20


@pytest.mark.parametrize("preset", PRESETS)
def test_update_function_is_memory_velocity(preset):
    errs = []
    for steps in (1000, 2000):
        ts = run(s_qp=1.0, preset=preset, steps=steps, periods=2)
        h = ts.settings.dtau
        total = ts.phi_ind + ts.phi_d
        fd = (total[2:] - total[:-2]) / (2 * h)
        errs.append(np.max(np.abs(fd - ts.f[1:-1])))
        assert errs[-1] < 2 * h * h
    assert 3 < errs[0] / errs[1] < 5


def test_update_function_finite_at_crossings():
    ts = run(s_qp=1.0)
    assert np.all(np.isfinite(ts.f))
    k = np.argmin(np.abs(ts.v[:2000]))
    assert abs(ts.v[k]) < 1e-2 and abs(ts.f[k]) < 10


@pytest.mark.parametrize("preset", PRESETS)
def test_damping_monotone_and_pinched(preset):
    ts = run(s_qp=1.0, preset=preset)
    assert np.all(np.diff(ts.E) >= 0)
    assert np.all(np.abs(ts.i) <= 2 * np.abs(ts.v) * (1 + 1e-12))


def test_constant_drive_decays_without_memory():
    p, d, ic, s = setup(s_qp=1.0, kind="constant")
    ts = simulate_memristor(p, d, ic, s)
    assert np.ptp(ts.gn) < 1e-12
    assert ts.max_residual < 1e-9


def test_overflow_reports_step():
    p = SystemParams(s_qp_ratio=1e300)
    d = DriveProtocol.from_params(p)
    for solver in (simulate_oracle, simulate_memristor):
        with pytest.raises(NumericalError) as info:
            solver(p, d, InitialConditions(), SolverSettings())
        assert info.value.step >= 0


def test_simulate_dispatch():
    p, d, ic, s = setup(s_qp=1e-2, model="oracle", periods=1)
    assert simulate(p, d, ic, s).settings.model == "oracle"


# -- classical limit and memoryless baseline --------------------------------

def test_classical_limit():
    p, d, ic, s = setup()
    ts = simulate_classical(p, d, ic, s)
    np.testing.assert_allclose(ts.phi_d, math.pi / 2 + np.sin(ts.tau), atol=1e-8)
    assert ts.i[0] == pytest.approx(run().i[0], rel=1e-12)
    crossings = find_pinch_points(ts)
    assert loop_area_shoelace(ts, crossings[0], crossings[1]) > 0.1
    with pytest.raises(UsageError):
        simulate_classical(p, d, InitialConditions.from_preset("red"), s)
    with pytest.raises(UsageError):
        simulate_classical(p, DriveProtocol(frequency_ratio=2.0), ic, s)


def test_baseline_single_valued():
    p, d, ic, s = setup()
    ts = simulate_nonlinear_baseline(p, d, ic, s)
    crossings = find_pinch_points(ts)
    for a, b in zip(crossings[:-1], crossings[1:]):
        assert loop_area_shoelace(ts, a, b) < 1e-9
    half = s.steps_per_period // 2
    np.testing.assert_allclose(ts.v[half:], -ts.v[:-half], atol=1e-12)
    np.testing.assert_allclose(ts.i[half:], -ts.i[:-half], atol=1e-12)
    with pytest.raises(ParameterError):
        simulate_nonlinear_baseline(SystemParams(s_qp_ratio=0.0), d, ic, s)


def test_baseline_reproduces_red_preset():
    p, d, ic, s = setup(s_qp=1e-4, preset="red")
    quantum = run(s_qp=1e-4, preset="red")
    g_scale = p.s_qp_ratio * math.exp(-G0_REF**2) * G0_REF**2 / 4

    def conductance(v):
        return g_scale * (1 + np.sin(v)), g_scale * np.cos(v)

    base = simulate_nonlinear_baseline(p, d, ic, s, conductance=conductance)
    assert np.max(np.abs(base.i - quantum.i)) < 1e-3
    crossings = find_pinch_points(base)
    ref = loop_area_shoelace(run(s_qp=1e-4), *find_pinch_points(run(s_qp=1e-4))[:2])
    for a, b in zip(crossings[:-1], crossings[1:]):
        assert loop_area_shoelace(base, a, b) < 1e-6 * ref


# -- currents -----------------------------------------------------------------

@pytest.mark.parametrize("preset", PRESETS)
@pytest.mark.parametrize("s_qp", S_VALUES)
def test_current_conservation(preset, s_qp):
    cur = currents(run(s_qp=s_qp, preset=preset))
    assert np.max(np.abs(cur.total)) < 1e-5


def test_currents_without_bath():
    ts = run(s_qp=0.0, preset="black")
    cur = currents(ts)
    assert np.all(cur.i_qp == 0.0)
    np.testing.assert_allclose(cur.i_ch, -cur.i_ind, atol=1e-9)


def test_quasiparticle_current_is_series_current():
    ts = run(s_qp=1.0, preset="black")
    np.testing.assert_allclose(currents(ts).i_qp, ts.i, rtol=1e-10, atol=1e-14)


def test_currents_rejections():
    p, d, ic, s = setup()
    with pytest.raises(UsageError):
        currents(simulate_classical(p, d, ic, s))
    p0 = SystemParams(v0_norm=0.0)
    ts = simulate_memristor(p0, DriveProtocol.from_params(p0), ic, SolverSettings(periods=1))
    with pytest.raises(ParameterError):
        currents(ts)
