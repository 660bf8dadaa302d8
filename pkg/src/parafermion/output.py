"""Deterministic JSON / CSV emitters.

Floats are written with 17 significant digits, complex numbers as
``[re, im]`` pairs, mapping keys in insertion order.  Identical inputs give
byte-identical text.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return f"[{_float(obj.real)}, {_float(obj.imag)}]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(to_json(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def series_to_csv(counts) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "c_N"])
    for N, c in enumerate(counts, start=1):
        writer.writerow([N, c])
    return buf.getvalue()


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_float(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def coord_key(coords) -> str:
    return ",".join(format(c, "g") for c in coords)


def loop_field_to_dict(field) -> dict:
    """Observable on a square domain keyed by mid-edge lattice coordinates."""
    dom = field.domain
    keyed = {dom.mid_edge_coords(me): v for me, v in field.values.items()}
    return {coord_key(k): keyed[k] for k in sorted(keyed)}


def saw_field_to_dict(field) -> dict:
    """Observable on a honeycomb patch keyed by mid-edge brick-wall coordinates."""
    out = {}
    for (v, w), val in sorted(field.values.items()):
        out[coord_key(((v[0] + w[0]) / 2, (v[1] + w[1]) / 2))] = val
    return out
