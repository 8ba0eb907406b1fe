"""Voltage decay against quasiparticle spectral density, and the two memductance forms.

Below log10(S_qp/omega10) ~ -2 the oscillation hardly decays over ten
periods; at S_qp = omega10 about 8% of the amplitude is lost.
"""
import math

import numpy as np

import qmemristor as qm
from qmemristor.analysis import decay_ratios

spec = qm.SweepSpec(log10_s_values=np.linspace(-4, 0, 9))
print("log10 s   i_ratio    v_ratio")
for row in qm.sweep_sqp(spec):
    print("%+6.2f    %.6f   %.6f" % (row.log10_s, row.i_ratio, row.v_ratio))

# the envelope is exp(-integral of the damping rate); with phi_d = pi/2 + sin(tau)
# the oscillating part integrates to zero over whole periods
d = qm.derive_scales(qm.SystemParams())
print("\nclosed-form envelope at s = 1: %.6f" % math.exp(-d.p10 / 4 * 20 * math.pi))

# sin2 is the default memductance; cos2 equals the Lindblad coherence decay rate
p = qm.SystemParams(s_qp_ratio=1.0)
ic = qm.InitialConditions.from_preset("blue")
drive = qm.DriveProtocol.from_params(p)
for form in ("sin2", "cos2"):
    ts = qm.simulate_memristor(p, drive, ic, qm.SolverSettings(memductance_form=form))
    rep = qm.memory_quantifier(ts)
    print("%s  N1/Ncl = %.4f  N19/Ncl = %.4f  v_ratio = %.5f"
          % (form, rep.ratios[0], rep.ratios[-1], decay_ratios(ts)[1]))

# cos2 under a drive equals sin2 under the drive reflected about pi/2
mirrored = qm.DriveProtocol(phi0=math.pi - drive.phi0, amplitude=-drive.amplitude)
ts = qm.simulate_memristor(p, mirrored, ic, qm.SolverSettings(memductance_form="sin2"))
rep = qm.memory_quantifier(ts)
print("sin2, mirrored drive: N1/Ncl = %.4f  N19/Ncl = %.4f" % (rep.ratios[0], rep.ratios[-1]))
