"""Deterministic CSV output with JSON provenance sidecars."""
from __future__ import annotations

import json
import math
from importlib import metadata
from pathlib import Path

import numpy as np

PACKAGE = "artifact"


def version() -> str:
    try:
        return metadata.version(PACKAGE)
    except metadata.PackageNotFoundError:
        return "0+unknown"


def fmt(v) -> str:
    """Shortest round-trip decimal form ('.' separator, no locale); integers stay integers."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def csv_text(header: list, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def jsonable(obj):
    """Recursively convert numpy and complex values into JSON-friendly objects."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else fmt(v)
    return obj


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_csv(path, header: list, rows, provenance: dict) -> Path:
    """Write a CSV and its provenance sidecar; returns the sidecar path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows), encoding="utf-8")
    meta = dict(provenance)
    meta.setdefault("version", version())
    meta["output"] = path.name
    side = sidecar_path(path)
    write_json(side, meta)
    return side


def write_json(path, data: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(jsonable(data), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
