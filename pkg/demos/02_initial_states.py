"""How the initial state shapes the loop at weak damping.

blue starts with full voltage, red with a pure inductive-phase offset and
black with both.  A red start makes the current a single-valued function of
the voltage, so the loops collapse to lines.
"""
import numpy as np

import qmemristor as qm

p = qm.SystemParams(s_qp_ratio=1e-4)
drive = qm.DriveProtocol.from_params(p)
settings = qm.SolverSettings(periods=10)

for name in ("blue", "red", "black"):
    ic = qm.InitialConditions.from_preset(name)
    rep = qm.memory_quantifier(qm.simulate_memristor(p, drive, ic, settings))
    odd, even = rep.ratios[0::2], rep.ratios[1::2]
    print("%-5s  loops %2d   N/N_cl  first %.6g  odd mean %.6g  even mean %.6g"
          % (name, rep.n_loops, rep.ratios[0], odd.mean(), even.mean()))

# A memoryless conductor g(v) = g_a (1 + v^2) under the same drive encloses no area
base = qm.simulate_nonlinear_baseline(p, drive, qm.InitialConditions(), settings)
rep = qm.memory_quantifier(base)
print("\nnonlinear baseline: max loop area %.1e" % rep.loop_areas.max())

# An arbitrary start works too; the coherence amplitude is z(0) = u + i v
ic = qm.InitialConditions.custom(v_init=0.5, u_init=-0.8)
ts = qm.simulate_memristor(p, drive, ic, settings)
rep = qm.memory_quantifier(ts)
print("custom (v, u) = (0.5, -0.8): ratios", np.round(rep.ratios[:4], 5), "...")
