"""Deterministic CSV/JSON writers and the matching reader.

Data files never carry timestamps; floats are written with 17 significant
digits, so a write/read round trip reproduces every value bit for bit.
Run metadata goes to a ``<output>.meta.json`` sidecar.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

SCHEMA_VERSION = "v1"
SCHEMA_PREFIX = "# qshock-schema"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _columns(data: dict) -> tuple[list[str], int]:
    names = list(data)
    lengths = {len(np.atleast_1d(np.asarray(data[k], dtype=object))) for k in names}
    if len(lengths) > 1:
        raise ValueError(f"columns have different lengths: {sorted(lengths)}")
    return names, (lengths.pop() if lengths else 0)


def render_csv(command: str, data: dict) -> str:
    names, n = _columns(data)
    cols = [list(np.atleast_1d(np.asarray(data[k], dtype=object))) for k in names]
    lines = [f"{SCHEMA_PREFIX} {SCHEMA_VERSION} {command}", ",".join(names)]
    for i in range(n):
        lines.append(",".join(_fmt(c[i]) for c in cols))
    return "\n".join(lines) + "\n"


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


def render_json(command: str, data: dict, meta: dict | None = None) -> str:
    _columns(data)
    doc = {
        "meta": _jsonable({"schema": f"qshock-schema {SCHEMA_VERSION}", "command": command, **(meta or {})}),
        "data": {k: _jsonable(np.atleast_1d(np.asarray(v, dtype=object)).tolist()) for k, v in data.items()},
    }
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def write_table(path, command: str, data: dict, fmt: str = "csv", meta: dict | None = None) -> str:
    """Render ``data`` (column name -> values) and write it to ``path``.

    ``path=None`` returns the text without writing.
    """
    if fmt == "csv":
        text = render_csv(command, data)
    elif fmt == "json":
        text = render_json(command, data, meta)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def write_sidecar(path, meta: dict) -> Path:
    side = Path(str(path) + ".meta.json")
    side.write_text(json.dumps(_jsonable(meta), indent=1, sort_keys=True) + "\n")
    return side


def _parse(cell: str):
    if cell == "true":
        return True
    if cell == "false":
        return False
    try:
        return float(cell)
    except ValueError:
        return cell


def read_table(path) -> tuple[str, dict]:
    """Read a CSV or JSON file produced by :func:`write_table`.

    Returns ``(command, columns)``.  Numeric columns come back as float
    arrays, anything else as lists.
    """
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        cols = {}
        for k, v in doc["data"].items():
            v = [float("nan") if x is None else x for x in v]
            cols[k] = _as_column(v)
        return doc["meta"]["command"], cols
    lines = text.splitlines()
    if not lines or not lines[0].startswith(SCHEMA_PREFIX):
        raise ValueError("missing schema comment line")
    parts = lines[0].split()
    if len(parts) < 4 or parts[2] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema line {lines[0]!r}")
    command = parts[3]
    names = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line]
    cols = {}
    for j, name in enumerate(names):
        cols[name] = _as_column([_parse(r[j]) for r in rows])
    return command, cols


def _as_column(values: list):
    if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        return np.asarray(values, dtype=float)
    return values
