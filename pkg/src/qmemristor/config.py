"""Flat ``key = value`` run configuration.

Every key is optional; an empty file gives the reference run (E_C/h = 1 GHz,
E_L = 1000 E_C, phi0 = pi/2, v0 = 1, S_qp = omega10, blue initialization,
10 periods).  Lines starting with ``#`` and trailing ``# ...`` are comments.

=================  =========================================================
key                meaning
=================  =========================================================
e_c_ghz            charging energy E_C/(2 pi hbar) in GHz
e_l_ratio          E_L / E_C
phi0               drive offset phi0 in rad
v0_norm            drive amplitude 2 e V0 / (hbar omega10)
s_qp_ratio         S_qp(omega10) / omega10
drive              ``resonant_sinusoid`` or ``constant``
frequency_ratio    drive frequency / omega10
preset             ``blue``, ``red``, ``black`` or ``custom``
v_init, u_init     initial voltage and inductive phase (``custom`` only)
periods            number of drive periods
steps_per_period   RK4 steps per period
memductance_form   ``sin2`` or ``cos2``
model              ``oracle``, ``memristor``, ``classical``,
                   ``nonlinear_baseline``
gap_ghz            gap Delta/h in GHz (enables the frequency-shift estimate)
x_qp, x_qp_a       quasiparticle density and occupation at the gap
g_t                junction conductance in siemens
output_dir         directory for result files
emit_svg           write ``hysteresis.svg``
sweep_log10_s      comma-separated log10(S_qp/omega10) values
sweep_periods      periods per sweep point
=================  =========================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import SweepSpec
from .dynamics import PRESETS, DriveProtocol, InitialConditions, SolverSettings
from .errors import ConfigError, QMemristorError
from .params import BathParams, SystemParams


def _bool(text):
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _word(text):
    return text.strip()


_KEYS = {
    "e_c_ghz": float,
    "e_l_ratio": float,
    "phi0": float,
    "v0_norm": float,
    "s_qp_ratio": float,
    "drive": _word,
    "frequency_ratio": float,
    "preset": _word,
    "v_init": float,
    "u_init": float,
    "periods": _int,
    "steps_per_period": _int,
    "memductance_form": _word,
    "model": _word,
    "gap_ghz": float,
    "x_qp": float,
    "x_qp_a": float,
    "g_t": float,
    "output_dir": _word,
    "emit_svg": _bool,
    "sweep_log10_s": _float_list,
    "sweep_periods": _int,
}


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams = field(default_factory=SystemParams)
    drive: DriveProtocol = field(default_factory=DriveProtocol)
    ic: InitialConditions = field(default_factory=InitialConditions)
    settings: SolverSettings = field(default_factory=SolverSettings)
    bath: BathParams | None = None
    output_dir: Path = Path("out")
    emit_svg: bool = False
    sweep: SweepSpec | None = None


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration; raises :class:`ConfigError`."""
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in _KEYS:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"duplicate key (first set on line {lines[key]})", key=key, line=lineno)
        try:
            parsed = _KEYS[key](value)
        except ValueError as exc:
            raise ConfigError(f"cannot parse value {value!r}: {exc}", key=key, line=lineno) from None
        if isinstance(parsed, float) and not math.isfinite(parsed):
            raise ConfigError(f"value must be finite, got {value!r}", key=key, line=lineno)
        values[key] = parsed
        lines[key] = lineno

    def build(keys, factory):
        try:
            return factory()
        except ConfigError as exc:
            if exc.key is None or exc.line is not None:
                raise
            raise ConfigError(exc.message, key=exc.key, line=lines.get(exc.key)) from None
        except QMemristorError as exc:
            present = [k for k in keys if k in lines]
            key = present[0] if len(present) == 1 else None
            for k in present:
                if k.removesuffix("_ghz") in str(exc):
                    key = k
                    break
            raise ConfigError(str(exc), key=key, line=lines.get(key)) from None

    params = build(
        ("e_c_ghz", "e_l_ratio", "phi0", "v0_norm", "s_qp_ratio"),
        lambda: SystemParams(
            e_c=values.get("e_c_ghz", 1.0),
            e_l_ratio=values.get("e_l_ratio", 1000.0),
            phi0=values.get("phi0", math.pi / 2),
            v0_norm=values.get("v0_norm", 1.0),
            s_qp_ratio=values.get("s_qp_ratio", 1.0),
        ),
    )
    drive = build(
        ("drive", "frequency_ratio"),
        lambda: DriveProtocol.from_params(
            params,
            kind=values.get("drive", "resonant_sinusoid"),
            frequency_ratio=values.get("frequency_ratio", 1.0),
        ),
    )
    ic = build(("preset", "v_init", "u_init"), lambda: _initial_conditions(values))
    settings = build(
        ("periods", "steps_per_period", "memductance_form", "model"),
        lambda: SolverSettings(
            periods=values.get("periods", 10),
            steps_per_period=values.get("steps_per_period", 2000),
            memductance_form=values.get("memductance_form", "sin2"),
            model=values.get("model", "memristor"),
        ),
    )
    bath = None
    bath_keys = ("gap_ghz", "x_qp", "x_qp_a", "g_t")
    if any(k in values for k in bath_keys):
        if "gap_ghz" not in values:
            key = next(k for k in bath_keys if k in values)
            raise ConfigError("bath parameters need gap_ghz", key=key, line=lines[key])
        bath = build(
            bath_keys,
            lambda: BathParams(
                gap=values["gap_ghz"],
                x_qp=values.get("x_qp", 0.0),
                x_qp_a=values.get("x_qp_a", 0.0),
                g_t=values.get("g_t", 0.0),
            ),
        )
    sweep = None
    if "sweep_log10_s" in values or "sweep_periods" in values:
        sweep = build(
            ("sweep_log10_s", "sweep_periods"),
            lambda: SweepSpec(
                log10_s_values=values.get("sweep_log10_s", (-4.0, -3.0, -2.0, -1.0, 0.0)),
                periods=values.get("sweep_periods", settings.periods),
                params=params,
                ic=ic,
                settings=settings,
            ),
        )
    return RunConfig(
        params=params,
        drive=drive,
        ic=ic,
        settings=settings,
        bath=bath,
        output_dir=Path(values.get("output_dir", "out")),
        emit_svg=values.get("emit_svg", False),
        sweep=sweep,
    )


def _initial_conditions(values):
    preset = values.get("preset", "blue")
    if preset not in (*PRESETS, "custom"):
        raise ConfigError(
            f"unknown preset {preset!r}; expected one of blue, red, black, custom", key="preset"
        )
    if preset == "custom":
        return InitialConditions.custom(values.get("v_init", 1.0), values.get("u_init", 0.0))
    for key in ("v_init", "u_init"):
        if key in values:
            raise ConfigError("only allowed with preset = custom", key=key)
    return InitialConditions.from_preset(preset)
