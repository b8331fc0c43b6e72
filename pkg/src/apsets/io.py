"""Point-set JSON documents and canonical numeric formatting.

The on-disk format is a single JSON object::

    {"dim": 1,
     "window": {"kind": "cube", "center": [0.0], "extent": 100.0},
     "points": [[-2.0], [0.0], [0.0], [1.5]]}

Repetition in ``points`` encodes multiplicity.  Documents whose points
fall outside the declared window are rejected.

Canonical serialization (sorted keys, floats at 12 significant digits)
makes identical runs byte-identical, which keeps golden files and diffs
stable.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import BALL, CUBE, PointConfiguration, Window
from .errors import ValidationError

SIGNIFICANT_DIGITS = 12


def config_to_dict(c: PointConfiguration) -> dict:
    return {
        "dim": c.dim,
        "window": {
            "kind": c.window.kind,
            "center": c.window.center.tolist(),
            "extent": c.window.extent,
        },
        "points": c.points.tolist(),
    }


def config_from_dict(doc: dict) -> PointConfiguration:
    try:
        dim = int(doc["dim"])
        w = doc["window"]
        window = Window(str(w["kind"]), np.asarray(w["center"], dtype=float), float(w["extent"]))
        points = np.asarray(doc["points"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed point-set document: {exc}") from exc
    if window.kind not in (CUBE, BALL):
        raise ValidationError(f"unknown window kind {window.kind!r}")
    if points.size == 0:
        points = points.reshape(0, dim)
    return PointConfiguration(dim, window, points)


def save_pointset(c: PointConfiguration, path) -> None:
    Path(path).write_text(dumps_canonical(config_to_dict(c)))


def load_pointset(path) -> PointConfiguration:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {path}") from exc
    return config_from_dict(doc)


def _canonical(obj):
    """Recursively round floats to 12 significant digits for stable output."""
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _canonical(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if v != v or v in (float("inf"), float("-inf")):
            return None
        return float(f"{v:.{SIGNIFICANT_DIGITS}g}")
    return obj


def dumps_canonical(obj) -> str:
    """Deterministic JSON: sorted keys, canonical floats, trailing newline."""
    return json.dumps(_canonical(obj), sort_keys=True, indent=2) + "\n"


def format_float(v: float) -> str:
    """Canonical text form of one float, matching the JSON convention."""
    return repr(float(f"{float(v):.{SIGNIFICANT_DIGITS}g}"))
