import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import G0_REF
from qmemristor import (
    BathParams,
    DriveProtocol,
    SystemParams,
    adiabatic_param,
    dephasing_strength,
    derive_scales,
    diagnose,
    freq_shift,
)
from qmemristor.diagnostics import dephasing_to_relaxation, max_adiabatic_param
from qmemristor.params import E_CHARGE, HBAR

# Frequency shift for gap = 10 hbar omega10, g_T = 1 uS, x_qp = 1e-6, phi_d = pi,
# evaluated once from the closed form with the unrounded g0 and frozen here (rad/s).
GOLDEN_SHIFT = -288.5959608455926


def reference_bath(x_qp=1e-6, x_qp_a=0.0):
    scales = derive_scales(SystemParams())
    gap_ghz = 10 * scales.omega10 / (2 * math.pi) / 1e9
    return BathParams(gap=gap_ghz, x_qp=x_qp, x_qp_a=x_qp_a, g_t=1e-6), scales


def test_adiabatic_maximum():
    p = SystemParams()
    alpha = max_adiabatic_param(p, DriveProtocol.from_params(p))
    assert alpha == pytest.approx(0.1495, abs=5e-4)
    assert alpha == pytest.approx(1 / derive_scales(p).d0, rel=1e-12)


def test_adiabatic_vanishes_at_turning_points():
    p = SystemParams()
    assert adiabatic_param(p, DriveProtocol.from_params(p), math.pi / 2) == pytest.approx(0.0, abs=1e-16)


def test_adiabatic_linear_in_amplitude():
    a = SystemParams(v0_norm=1.0)
    b = SystemParams(v0_norm=2.0)
    ma = max_adiabatic_param(a, DriveProtocol.from_params(a))
    mb = max_adiabatic_param(b, DriveProtocol.from_params(b))
    assert mb == pytest.approx(2 * ma, rel=1e-12)
    p = SystemParams()
    assert max_adiabatic_param(p, DriveProtocol(kind="constant")) == 0.0


def test_frequency_shift_golden():
    bath, scales = reference_bath()
    shift = freq_shift(bath, scales, math.pi)
    assert shift.delta_omega == pytest.approx(GOLDEN_SHIFT, rel=1e-9)
    gap = 10 * HBAR * scales.omega10
    closed = -(G0_REF**2) * (1e-6 * gap / E_CHARGE**2) * 1e-6 * math.sqrt(20)
    assert shift.delta_omega == pytest.approx(closed, rel=2e-6)
    assert shift.relative == pytest.approx(abs(GOLDEN_SHIFT) / scales.omega10, rel=1e-9)


def test_frequency_shift_zeros():
    bath, scales = reference_bath()
    assert freq_shift(bath, scales, 0.0).delta_omega == 0.0
    empty, _ = reference_bath(x_qp=0.0, x_qp_a=0.0)
    assert freq_shift(empty, scales, 1.3).delta_omega == 0.0


def test_frequency_shift_sign_flip():
    _, scales = reference_bath()
    lo, _ = reference_bath(x_qp=1e-6, x_qp_a=1e-7)
    hi, _ = reference_bath(x_qp=1e-6, x_qp_a=1e-5)
    # sqrt(2 Delta / hbar omega10) = sqrt(20) ~ 4.47 against 2 pi x_qp_a / x_qp
    assert freq_shift(lo, scales, 2.0).delta_omega < 0
    assert freq_shift(hi, scales, 2.0).delta_omega > 0


def test_dephasing_strength():
    assert dephasing_strength(G0_REF, 0.0) == 0.0
    assert dephasing_strength(G0_REF, math.pi) == pytest.approx(7.77e-6, abs=5e-9)
    base = [dephasing_strength(g, math.pi) / (g**4 * math.exp(-g * g)) for g in (0.05, 0.1, 0.2)]
    np.testing.assert_allclose(base, 0.25, rtol=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 2.0), st.floats(-10, 10))
def test_dephasing_bounds(g0, phi):
    val = dephasing_strength(g0, phi)
    assert 0.0 <= val <= g0**4 / 4 + 1e-300


def test_dephasing_small_compared_to_relaxation():
    g0 = derive_scales(SystemParams()).g0
    phi = np.linspace(0.0, 2.5, 50)
    ratio = dephasing_to_relaxation(g0, phi)
    # g0^2 tan^2(phi/2) / 4 away from phi = pi
    np.testing.assert_allclose(ratio, g0**2 * np.tan(phi / 2) ** 2 / 4, rtol=1e-10, atol=1e-18)
    assert np.all(ratio[phi <= 2.0] < g0**2)
    assert np.isnan(dephasing_to_relaxation(g0, math.pi))


def test_diagnose_report():
    p = SystemParams()
    d = DriveProtocol.from_params(p)
    tau = np.linspace(0, 2 * math.pi, 201)
    rep = diagnose(p, d, tau)
    assert rep.alpha_max == pytest.approx(0.1495, abs=5e-4)
    assert rep.delta_omega_qp is None and rep.delta_omega_relative is None
    assert rep.alpha_series.shape == tau.shape
    assert 0 <= rep.dephasing_strength <= derive_scales(p).g0 ** 4 / 4
    bath, _ = reference_bath()
    with_bath = diagnose(p, d, tau, bath)
    assert with_bath.delta_omega_qp < 0
    assert set(with_bath.to_dict()) == {
        "alpha_max", "delta_omega_qp", "delta_omega_relative", "dephasing_strength",
        "ratio_dephasing_to_relax",
    }
