"""Reference run: a pinched current-voltage loop and its memory quantifiers.

Run from the repository root:  python demos/01_pinched_hysteresis.py
"""
import numpy as np

import qmemristor as qm
from qmemristor.output import write_svg

# Default parameters: E_C/h = 1 GHz, E_L = 1000 E_C, phi0 = pi/2,
# unit drive amplitude and S_qp = omega10
p = qm.SystemParams()
scales = qm.derive_scales(p)
print("transition frequency  %.4f GHz" % (scales.omega10 / 2 / np.pi / 1e9))
print("oscillation period    %.3f ps" % (scales.period * 1e12))
print("voltage unit V0       %.2f uV" % (scales.v0_si * 1e6))

drive = qm.DriveProtocol.from_params(p)
ic = qm.InitialConditions.from_preset("blue")  # v(0) = 1, no inductive offset
ts = qm.simulate_memristor(p, drive, ic, qm.SolverSettings(periods=10))

# the loop closes whenever v crosses zero: i = gn * v vanishes there too
crossings = qm.find_pinch_points(ts)
print("\n%d zero crossings -> %d loops" % (len(crossings), len(crossings) - 1))

rep = qm.memory_quantifier(ts)
print("classical loop area  %.5f" % rep.classical_ref)
print("\n k   N_k/N_cl   area    memory part   explicit part")
for k, (r, a, mem, exp) in enumerate(
        zip(rep.ratios, rep.loop_areas, rep.memory_part, rep.explicit_part), start=1):
    print("%2d   %.5f   %.5f   %+.5f      %+.5f" % (k, r, a, mem, exp))

# the quantifier is a line integral; the shoelace area is an independent check
print("\nworst quantifier/area mismatch %.1e" % rep.agreement_errors.max())

# charge conservation at the node: charging + inductive + quasiparticle = 0
cur = qm.currents(ts)
print("max |i_ch + i_ind + i_qp|     %.1e" % np.abs(cur.total).max())

write_svg(ts, "hysteresis_reference.svg")
print("\nwrote hysteresis_reference.svg")
