"""Space, edge-list and diagram files.

Output JSON is written by :func:`dumps`: keys sorted, floats with 17
significant digits, infinity as ``null``, so identical inputs give
byte-identical files.
"""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import InputError
from .persistence import PersistenceDiagram
from .spaces import Space, WeightedDigraph

_INF_TOKENS = {"inf", "+inf", "infinity", "+infinity", "null", "none", ""}


def _number(v) -> float:
    if v is None:
        return math.inf
    if isinstance(v, str):
        s = v.strip()
        if s.lower() in _INF_TOKENS:
            return math.inf
        try:
            return float(s)
        except ValueError:
            raise InputError(f"not a number: {v!r}") from None
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"not a number: {v!r}")
    return float(v)


def _format_float(x: float) -> str:
    if math.isinf(x) or math.isnan(x):
        return "null"
    return format(x, ".17g")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted((str(k), v) for k, v in obj.items())
        body = ",\n".join(f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in items)
        return "{\n" + body + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (list, tuple, dict)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        body = ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj)
        return "[\n" + body + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _space_from_json(payload) -> Space:
    if not isinstance(payload, dict) or "distances" not in payload:
        raise InputError('space JSON needs a "distances" matrix')
    rows = payload["distances"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InputError('"distances" must be a list of rows')
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("distance matrix is not square")
    dist = np.array([[_number(v) for v in r] for r in rows], dtype=np.float64).reshape(n, n)
    labels = payload.get("points")
    if labels is None:
        labels = [str(i) for i in range(n)]
    return Space(tuple(str(p) for p in labels), dist)


def _space_from_csv(text: str) -> Space:
    rows = [r for r in csv.reader(text.splitlines()) if any(c.strip() for c in r)]
    if not rows:
        raise InputError("empty CSV file")
    header = [c.strip() for c in rows[0]]
    body = rows[1:]
    row_labels = bool(header) and header[0] == ""
    if row_labels:
        header = header[1:]
    n = len(header)
    if len(body) != n:
        raise InputError(f"{n} column labels but {len(body)} rows")
    matrix = []
    for r in body:
        if row_labels:
            r = r[1:]
        if len(r) != n:
            raise InputError("distance matrix is not square")
        matrix.append([_number(v) for v in r])
    return Space(tuple(header), np.array(matrix, dtype=np.float64).reshape(n, n))


def read_space(path) -> Space:
    """Read a space from JSON (``points``/``distances``) or CSV with a header row."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"{path}: invalid JSON ({e})") from None
        return _space_from_json(payload)
    return _space_from_csv(text)


def space_to_json(space: Space) -> dict:
    return {
        "points": [str(p) for p in space.labels],
        "distances": [[float(v) for v in row] for row in space.dist],
    }


def write_space(space: Space, path) -> None:
    Path(path).write_text(dumps(space_to_json(space)) + "\n", encoding="utf-8")


def read_edge_list(path) -> WeightedDigraph:
    """CSV rows ``src,dst,weight``; vertices are registered in order of first appearance."""
    vertices: dict[str, None] = {}
    arrows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not any(c.strip() for c in row) or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 3:
                raise InputError(f"line {lineno}: expected src,dst,weight")
            src, dst, w = (c.strip() for c in row)
            try:
                weight = float(w)
            except ValueError:
                if lineno == 1:
                    continue  # header
                raise InputError(f"line {lineno}: bad weight {w!r}") from None
            if not weight >= 0 or math.isinf(weight):
                raise InputError(f"line {lineno}: weight must be a finite non-negative number, got {w!r}")
            vertices.setdefault(src)
            vertices.setdefault(dst)
            arrows.append((src, dst, weight))
    return WeightedDigraph(vertices, arrows)


def diagram_file(construction: str, params: dict, diagram: PersistenceDiagram) -> dict:
    return {"construction": construction, "params": dict(params), "diagrams": diagram.to_json()}


def read_diagram_file(path) -> tuple[str, dict, PersistenceDiagram]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return payload["construction"], payload.get("params", {}), PersistenceDiagram.from_json(payload["diagrams"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"{path}: malformed diagram file ({e})") from None
