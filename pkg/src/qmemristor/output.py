"""CSV, JSON and SVG emission.

Numbers are written in scientific notation with 12 significant digits so
that repeated runs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .dynamics import TimeSeries

CSV_COLUMNS = (
    ("tau", "tau"),
    ("phi_d", "phi_d"),
    ("phi_avg", "m"),
    ("phi_ind", "phi_ind"),
    ("v_norm", "v"),
    ("i_norm", "i"),
    ("g_norm", "g"),
    ("gamma_norm", "gamma"),
    ("damping_exp", "E"),
)
SWEEP_COLUMNS = ("log10_s", "i_ratio", "v_ratio")


def fmt(x):
    return f"{x:.11e}"


def round12(x):
    """Round a float to 12 significant digits (non-finite values become None)."""
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(fmt(x))


def write_timeseries_csv(ts: TimeSeries, path):
    cols = [getattr(ts, attr) for _, attr in CSV_COLUMNS]
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(name for name, _ in CSV_COLUMNS) + "\n")
        for row in zip(*cols):
            fh.write(",".join(fmt(x) for x in row) + "\n")


def read_timeseries_csv(path):
    """Read a time-series CSV back into a dict of column arrays."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, k] for k, name in enumerate(header)}


def write_sweep_csv(rows, path):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(SWEEP_COLUMNS) + "\n")
        for r in rows:
            fh.write(",".join(fmt(x) for x in (r.log10_s, r.i_ratio, r.v_ratio)) + "\n")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round12(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def write_json(data, path):
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        json.dump(_clean(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def hysteresis_svg(ts: TimeSeries, width=480, height=480, arrows=24):
    """SVG document with the (v, i) polyline and direction arrows."""
    v, i = ts.v, ts.i
    pad = 40
    vmax = float(np.max(np.abs(v))) or 1.0
    imax = float(np.max(np.abs(i))) or 1.0

    def xy(a, b):
        x = pad + (a / vmax + 1) / 2 * (width - 2 * pad)
        y = height - pad - (b / imax + 1) / 2 * (height - 2 * pad)
        return x, y

    step = max(1, len(v) // 4000)
    pts = " ".join("%.2f,%.2f" % xy(a, b) for a, b in zip(v[::step], i[::step]))
    x0, y0 = xy(0.0, 0.0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" "
        "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">"
        "<path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>",
        f'<line x1="{pad}" y1="{y0:.2f}" x2="{width - pad}" y2="{y0:.2f}" stroke="#888"/>',
        f'<line x1="{x0:.2f}" y1="{pad}" x2="{x0:.2f}" y2="{height - pad}" stroke="#888"/>',
        f'<polyline points="{pts}" fill="none" stroke="#c0392b" stroke-width="1"/>',
    ]
    n = len(v)
    for k in np.linspace(0, n - 2, arrows + 2, dtype=int)[1:-1]:
        xa, ya = xy(v[k], i[k])
        xb, yb = xy(v[k + 1], i[k + 1])
        parts.append(
            f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}" '
            'stroke="#c0392b" marker-end="url(#arrow)"/>'
        )
    parts.append(f'<text x="{width - pad}" y="{y0 - 6:.2f}" text-anchor="end">v</text>')
    parts.append(f'<text x="{x0 + 6:.2f}" y="{pad + 12}">i</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(ts: TimeSeries, path):
    Path(path).write_text(hysteresis_svg(ts), encoding="utf-8")
