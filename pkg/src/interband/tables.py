"""CSV files with ``#`` metadata headers.

Each header line is ``# key=value`` with the value JSON-encoded, so floats
(written with ``repr`` precision), integers, booleans, strings and infinities
read back exactly. Data rows follow a single column-name line.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .propagate import TimeSeries

__all__ = [
    "write_table",
    "read_table",
    "write_timeseries",
    "read_timeseries",
    "format_value",
]


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def format_value(value: Any) -> str:
    """One CSV cell: floats at full precision, everything else via ``str``."""
    value = _plain(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    if value is None:
        return ""
    return str(value)


def _header_lines(meta: Mapping[str, Any]) -> list[str]:
    lines = []
    for key, value in meta.items():
        if "=" in key or "\n" in key:
            raise ValueError(f"metadata key {key!r} may not contain '=' or newlines")
        lines.append(f"# {key}={json.dumps(_plain(value))}\n")
    return lines


def write_table(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    meta: Mapping[str, Any] | None = None,
) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.writelines(_header_lines(meta or {}))
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([format_value(v) for v in row] for row in rows)
    return path


def read_table(path: str | Path) -> tuple[dict, list[str], list[list[str]]]:
    """(metadata, column names, rows of raw strings)."""
    meta: dict[str, Any] = {}
    with Path(path).open(newline="") as fh:
        body = []
        for line in fh:
            if line.startswith("#") and not body:
                key, _, raw = line[1:].strip().partition("=")
                meta[key] = json.loads(raw)
            else:
                body.append(line)
    parsed = [row for row in csv.reader(body) if row]
    if not parsed:
        return meta, [], []
    return meta, parsed[0], parsed[1:]


def write_timeseries(path: str | Path, ts: TimeSeries, extra: Mapping[str, Any] | None = None) -> Path:
    meta = dict(ts.meta)
    if extra:
        meta.update(extra)
    return write_table(path, ("time", "value"), zip(ts.times, ts.values), meta)


def read_timeseries(path: str | Path) -> TimeSeries:
    meta, columns, rows = read_table(path)
    if columns != ["time", "value"]:
        raise ValueError(f"{path}: expected columns time,value, got {columns}")
    data = np.array(rows, dtype=float).reshape(-1, 2)
    return TimeSeries(data[:, 0], data[:, 1], meta)
