"""Command-line front end.

::

    qmemristor simulate CONFIG [--verify] [--out DIR]
    qmemristor sweep CONFIG [--out DIR]
    qmemristor diagnostics CONFIG
    qmemristor compare CONFIG

Exit status: 0 success, 1 configuration or output-path error, 2 numerical
failure, 3 self-check failure under ``--verify``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .analysis import (
    AGREEMENT_RTOL,
    SweepSpec,
    memory_quantifier,
    sweep_sqp,
)
from .config import RunConfig, parse_config
from .diagnostics import diagnose
from .dynamics import (
    TimeSeries,
    currents,
    simulate,
    simulate_memristor,
    simulate_oracle,
)
from .errors import ConfigError, ConsistencyError, InsufficientDataError, NumericalError
from .output import write_json, write_svg, write_sweep_csv, write_timeseries_csv
from .params import derive_scales

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

EQUIVALENCE_RTOL = 1e-6
RESIDUAL_TOL = 1e-6
CONSERVATION_TOL = 1e-5


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    limit: float

    @property
    def ok(self):
        return bool(self.value <= self.limit)

    def to_dict(self):
        return {"name": self.name, "value": self.value, "limit": self.limit, "ok": self.ok}


def _rel_dev(a, b):
    scale = float(np.max(np.abs(b)))
    diff = float(np.max(np.abs(a - b)))
    return diff / scale if scale > 0 else diff


def compare_solvers(cfg: RunConfig):
    """Maximum amplitude-normalized deviation between the oracle and memristor solvers."""
    a = simulate_oracle(cfg.params, cfg.drive, cfg.ic, cfg.settings)
    b = simulate_memristor(cfg.params, cfg.drive, cfg.ic, cfg.settings)
    return {
        "v": _rel_dev(b.v, a.v),
        "i": _rel_dev(b.i, a.i),
        "phi_ind": _rel_dev(b.phi_ind, a.phi_ind),
        "max_residual": b.max_residual,
    }


def self_check(cfg: RunConfig, ts: TimeSeries, report=None):
    """Run the invariant checks enabled by ``--verify``."""
    checks = []
    model = ts.settings.model
    if model in ("oracle", "memristor"):
        dev = compare_solvers(cfg)
        for key in ("v", "i", "phi_ind"):
            checks.append(Check(f"oracle_equivalence_{key}", dev[key], EQUIVALENCE_RTOL))
        checks.append(Check("self_consistency_residual", ts.max_residual, RESIDUAL_TOL))
        if cfg.params.v0_norm > 0:
            cur = currents(ts)
            checks.append(Check("current_conservation", float(np.max(np.abs(cur.total))), CONSERVATION_TOL))
    checks.append(Check("damping_monotonic", float(max(0.0, -np.min(np.diff(ts.E)))), 1e-14))
    bound = 2.0 * np.abs(ts.v) * (1 + 1e-12) + 1e-300
    checks.append(Check("pinching", float(np.max(np.abs(ts.i) - bound).clip(min=0)), 0.0))
    if report is not None and report.n_loops:
        checks.append(Check("quantifier_area_agreement", float(np.max(report.agreement_errors)), AGREEMENT_RTOL))
    return checks


def build_summary(cfg: RunConfig, ts: TimeSeries, report, loop_error=None):
    s = derive_scales(cfg.params)
    tau = ts.tau
    diag = diagnose(cfg.params, cfg.drive, tau, cfg.bath)
    summary = {
        "model": ts.settings.model,
        "memductance_form": ts.settings.memductance_form,
        "preset": cfg.ic.preset,
        "initial": {"v": cfg.ic.v_init, "u": cfg.ic.u_init},
        "params": {
            "e_c_ghz": cfg.params.e_c,
            "e_l_ratio": cfg.params.e_l_ratio,
            "phi0": cfg.params.phi0,
            "v0_norm": cfg.params.v0_norm,
            "s_qp_ratio": cfg.params.s_qp_ratio,
        },
        "derived_scales": {
            "omega10_rad_per_s": s.omega10,
            "f10_ghz": s.omega10 / (2 * np.pi) / 1e9,
            "period_s": s.period,
            "g0": s.g0,
            "d0": s.d0,
            "c_d_farad": s.c_d,
            "v0_volt": s.v0_si,
            "g0_siemens": s.g_norm,
        },
        "samples": len(ts),
        "max_self_consistency_residual": ts.max_residual,
        "diagnostics": diag.to_dict(),
    }
    if report is not None:
        summary.update(report.to_dict())
    else:
        summary["loop_analysis_error"] = loop_error
    return summary


def run(cfg: RunConfig, verify=False, out=None, stream=None):
    """Simulate, analyse and write result files; return the exit status."""
    stream = stream or sys.stderr
    outdir = Path(out) if out is not None else cfg.output_dir
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        print(f"error: cannot write to output directory {outdir}: {exc.strerror or exc}", file=stream)
        return EXIT_CONFIG
    try:
        ts = simulate(cfg.params, cfg.drive, cfg.ic, cfg.settings)
        try:
            report = memory_quantifier(ts)
            loop_error = None
        except InsufficientDataError as exc:
            report, loop_error = None, str(exc)
        summary = build_summary(cfg, ts, report, loop_error)
        checks = self_check(cfg, ts, report) if verify else []
        if verify:
            summary["verify"] = [c.to_dict() for c in checks]
        sweep_rows = sweep_sqp(cfg.sweep) if cfg.sweep is not None else None
    except (NumericalError, ConsistencyError) as exc:
        print(f"error: numerical failure: {exc}", file=stream)
        return EXIT_NUMERIC
    try:
        write_timeseries_csv(ts, outdir / "timeseries.csv")
        write_json(summary, outdir / "summary.json")
        if cfg.emit_svg:
            write_svg(ts, outdir / "hysteresis.svg")
        if sweep_rows is not None:
            write_sweep_csv(sweep_rows, outdir / "sweep.csv")
    except OSError as exc:
        print(f"error: cannot write results to {outdir}: {exc}", file=stream)
        return EXIT_CONFIG
    failed = [c for c in checks if not c.ok]
    for c in failed:
        print(f"self-check failed: {c.name} = {c.value:.3e} > {c.limit:.3e}", file=stream)
    return EXIT_VERIFY if failed else EXIT_OK


def _load(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="qmemristor", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_sim = sub.add_parser("simulate", help="run one simulation and write result files")
    p_sim.add_argument("config")
    p_sim.add_argument("--verify", action="store_true", help="run invariant self-checks")
    p_sim.add_argument("--out", help="output directory (overrides output_dir)")
    p_sw = sub.add_parser("sweep", help="spectral-density sweep, writes sweep.csv")
    p_sw.add_argument("config")
    p_sw.add_argument("--out")
    p_dg = sub.add_parser("diagnostics", help="print validity estimates as JSON")
    p_dg.add_argument("config")
    p_cmp = sub.add_parser("compare", help="oracle vs memristor solver deviation")
    p_cmp.add_argument("config")
    args = parser.parse_args(argv)

    try:
        cfg = _load(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "simulate":
            return run(cfg, verify=args.verify, out=args.out)
        if args.command == "sweep":
            spec = cfg.sweep or SweepSpec(
                (-4.0, -3.0, -2.0, -1.0, 0.0), cfg.settings.periods, cfg.params, None, cfg.ic,
                cfg.settings,
            )
            outdir = Path(args.out) if args.out else cfg.output_dir
            rows = sweep_sqp(spec)
            try:
                outdir.mkdir(parents=True, exist_ok=True)
                write_sweep_csv(rows, outdir / "sweep.csv")
            except OSError as exc:
                print(f"error: cannot write to output directory {outdir}: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            for r in rows:
                print(f"{r.log10_s:+.2f}  i_ratio={r.i_ratio:.6f}  v_ratio={r.v_ratio:.6f}")
            return EXIT_OK
        if args.command == "diagnostics":
            diag = diagnose(cfg.params, cfg.drive, cfg.settings.grid(), cfg.bath)
            print(json.dumps(diag.to_dict(), indent=2, sort_keys=True))
            return EXIT_OK
        if args.command == "compare":
            cfg = replace(cfg, settings=replace(cfg.settings, model="memristor"))
            print(json.dumps(compare_solvers(cfg), indent=2, sort_keys=True))
            return EXIT_OK
    except (NumericalError, ConsistencyError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
