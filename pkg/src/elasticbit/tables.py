"""Deterministic CSV / JSON table emission.

CSV: header row always present, ``.`` decimal separator, 17 significant
digits, LF line endings.  JSON: one object with ``schema`` (the column
names), ``params`` and ``rows`` (lists in column order; NaN is written as
``null``).
"""

from __future__ import annotations

import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

__all__ = ["format_value", "emit_table", "read_table"]


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


@contextmanager
def _sink(destination):
    if destination is None or destination == "-":
        yield sys.stdout
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def emit_table(rows, header, fmt="csv", destination=None, params=None):
    """Write ``rows`` under ``header`` to ``destination`` (a path, or stdout if None).

    Raises ``OSError`` with the offending path when the file cannot be written.
    """
    header = list(header)
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != len(header):
            raise ValueError(f"row has {len(r)} fields, header has {len(header)}")
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(format_value(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        doc = {
            "schema": header,
            "params": params or {},
            "rows": [[_jsonable(v) for v in r] for r in rows],
        }
        text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}; use csv or json")
    try:
        with _sink(destination) as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {destination}: {exc.strerror}") from exc


def _parse_csv_field(s):
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def read_table(path):
    """Load a table written by :func:`emit_table`; returns ``(header, rows, params)``."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        rows = [[math.nan if v is None else v for v in r] for r in doc["rows"]]
        return doc["schema"], rows, doc["params"]
    lines = text.split("\n")
    header = lines[0].split(",")
    rows = [[_parse_csv_field(f) for f in line.split(",")] for line in lines[1:] if line]
    return header, rows, {}
