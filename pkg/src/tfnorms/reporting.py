"""Deterministic report serialization and signal file I/O.

Reports must be byte-identical across runs with the same config and seed, so
floats are rendered with a fixed 17-significant-digit format, dictionaries
keep insertion order, and nothing time- or path-dependent enters the output.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .grid import Grid, SampledSignal

__all__ = [
    "format_float",
    "dumps_canonical",
    "report_to_dict",
    "write_report",
    "save_signal",
    "load_signal",
]

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(float(x), ".17g")


def dumps_canonical(obj) -> str:
    """Compact JSON with deterministic float formatting and key order."""
    pieces: list = []
    _write(obj, pieces)
    return "".join(pieces)


def _write(obj, out: list) -> None:
    if obj is None or isinstance(obj, bool):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _write(item, out)
        out.append("]")
    elif isinstance(obj, dict):
        out.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _write(value, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")


def report_to_dict(report, config: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "experiment": report.name,
        "config": config,
        "rows": report.rows,
        "assertions": [a.to_json_dict() for a in report.assertions],
        "extras": report.extras,
    }


def write_report(out_dir, report, config: dict) -> Path:
    """Write report.json and report.csv into out_dir; returns the JSON path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    json_path = out / "report.json"
    json_path.write_text(dumps_canonical(report_to_dict(report, config)) + "\n")

    csv_path = out / "report.csv"
    columns: list = []
    for row in report.rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    lines = [",".join(columns)]
    for row in report.rows:
        cells = []
        for key in columns:
            value = row.get(key, "")
            if isinstance(value, (float, np.floating)):
                cells.append(format(float(value), ".17g"))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    csv_path.write_text("\n".join(lines) + "\n")
    return json_path


def save_signal(path, f: SampledSignal) -> None:
    """CSV with header x,re,im plus a JSON sidecar holding {n, L}."""
    path = Path(path)
    x = f.grid.points()
    lines = ["x,re,im"]
    for xj, value in zip(x, f.samples):
        lines.append(
            f"{format(xj, '.17g')},{format(value.real, '.17g')},{format(value.imag, '.17g')}"
        )
    path.write_text("\n".join(lines) + "\n")
    sidecar = {"n": f.grid.n, "L": f.grid.half_width}
    path.with_suffix(".json").write_text(dumps_canonical(sidecar) + "\n")


def load_signal(path) -> SampledSignal:
    path = Path(path)
    sidecar = json.loads(path.with_suffix(".json").read_text())
    grid = Grid(int(sidecar["n"]), float(sidecar["L"]))
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.shape != (grid.n, 3):
        raise ValueError(
            f"signal file has shape {data.shape}, expected ({grid.n}, 3) per its sidecar"
        )
    return SampledSignal(grid, data[:, 1] + 1j * data[:, 2])
