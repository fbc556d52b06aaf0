"""JSON curve files and result files.

Floats are written with 17 significant digits so that every value reads back
to the same double.
"""
from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from .curve import SbvCurve, check_curve


class CurveFileError(ValueError):
    """File content is not a curve description (bad JSON or wrong layout)."""


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialised")
    s = "%.17g" % x
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    """Deterministic JSON text with 17-digit floats."""
    return _encode(obj, indent, 0) + "\n"


def curve_to_dict(c: SbvCurve) -> Dict[str, Any]:
    nodes: List[Dict[str, Any]] = []
    for k in range(c.n_nodes):
        if np.array_equal(c.left[k], c.right[k]):
            nodes.append({"t": float(c.t[k]), "value": c.left[k].tolist()})
        else:
            nodes.append({"t": float(c.t[k]), "left": c.left[k].tolist(), "right": c.right[k].tolist()})
    return {"dimension": c.dimension, "nodes": nodes}


def _vector(node: dict, key: str, d: int, k: int) -> List[float]:
    v = node[key]
    if not isinstance(v, list) or len(v) != d or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise CurveFileError(f"node {k}: '{key}' must be a list of {d} numbers")
    return [float(x) for x in v]


def curve_from_dict(data: Any, validate: bool = True) -> SbvCurve:
    """Build a curve from the parsed JSON layout; ``validate`` runs the curve checks."""
    if not isinstance(data, dict) or "nodes" not in data or "dimension" not in data:
        raise CurveFileError("expected an object with 'dimension' and 'nodes'")
    d = data["dimension"]
    nodes = data["nodes"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise CurveFileError("'dimension' must be a positive integer")
    if not isinstance(nodes, list) or not nodes:
        raise CurveFileError("'nodes' must be a non-empty list")
    t, left, right = [], [], []
    for k, node in enumerate(nodes):
        if not isinstance(node, dict) or "t" not in node:
            raise CurveFileError(f"node {k}: expected an object with 't'")
        if not isinstance(node["t"], (int, float)) or isinstance(node["t"], bool):
            raise CurveFileError(f"node {k}: 't' must be a number")
        t.append(float(node["t"]))
        if "value" in node:
            if "left" in node or "right" in node:
                raise CurveFileError(f"node {k}: give either 'value' or 'left'/'right'")
            v = _vector(node, "value", d, k)
            left.append(v)
            right.append(v)
        elif "left" in node and "right" in node:
            left.append(_vector(node, "left", d, k))
            right.append(_vector(node, "right", d, k))
        else:
            raise CurveFileError(f"node {k}: missing 'value' or 'left'/'right'")
    c = SbvCurve(np.array(t), np.array(left).reshape(-1, d), np.array(right).reshape(-1, d))
    if validate:
        check_curve(c)
    return c


def dumps_curve(c: SbvCurve) -> str:
    return dumps(curve_to_dict(c))


def loads_curve(text: str, validate: bool = True) -> SbvCurve:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CurveFileError(f"malformed JSON: {exc}") from exc
    return curve_from_dict(data, validate=validate)


def read_curve(path, validate: bool = True) -> SbvCurve:
    return loads_curve(Path(path).read_text(), validate=validate)


def write_text(path, text: str) -> None:
    Path(path).write_text(text)


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def reparam_to_dict(phi) -> Dict[str, Any]:
    return {"x": phi.x.tolist(), "y": phi.y.tolist()}
