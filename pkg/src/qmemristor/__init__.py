"""Simulation of a superconducting quantum memristor driven by quasiparticle tunneling.

The package follows the mean voltage, phase and quasiparticle current of a
phase-biased rf SQUID whose dc-SQUID junction has its supercurrent cancelled,
extracts pinched hysteresis loops and quantifies their memory content.
"""

from .analysis import (
    HysteresisReport,
    SweepSpec,
    find_pinch_points,
    loop_area_shoelace,
    memory_quantifier,
    sweep_sqp,
)
from .diagnostics import adiabatic_param, dephasing_strength, diagnose, freq_shift
from .dynamics import (
    DriveProtocol,
    InitialConditions,
    SolverSettings,
    TimeSeries,
    currents,
    drive_eval,
    memductance,
    phi_ind_regularized,
    simulate,
    simulate_classical,
    simulate_memristor,
    simulate_nonlinear_baseline,
    simulate_oracle,
    update_f,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    InsufficientDataError,
    NumericalError,
    ParameterError,
    UsageError,
)
from .params import (
    BathParams,
    DerivedScales,
    JunctionPair,
    SystemParams,
    derive_scales,
    effective_junction,
    to_si,
)
from .specfun import (
    decay_rate,
    displacement_element,
    laguerre_assoc,
    p_factor,
    sin_half_element_sq,
)

__version__ = "0.1.0"
