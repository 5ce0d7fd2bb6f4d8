"""CSV/JSON emission with round-trip-exact floats."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


class PathFileError(ValueError):
    """Raised when a path file cannot be parsed."""


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path, columns: dict) -> Path:
    """Write equal-length columns with a header row, LF line endings."""
    path = Path(path)
    names = list(columns)
    cols = [np.asarray(columns[n]) for n in names]
    n = {c.shape[0] for c in cols}
    if len(n) != 1:
        raise ValueError(f"columns have unequal lengths: {sorted(n)}")
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(names)
        for row in zip(*(c.tolist() for c in cols)):
            out.writerow([fmt(v) for v in row])
    return path


def read_csv(path) -> dict:
    """Read a file written by :func:`write_csv` back into float arrays."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise PathFileError(f"{path}: empty file")
    header, body = rows[0], rows[1:]
    data = {h: [] for h in header}
    for lineno, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise PathFileError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
        for h, cell in zip(header, row):
            try:
                v = float(cell)
            except ValueError:
                raise PathFileError(f"{path}:{lineno}: column {h!r}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise PathFileError(f"{path}:{lineno}: column {h!r}: non-finite value {cell!r}")
            data[h].append(v)
    return {h: np.array(v) for h, v in data.items()}


def read_path_values(path) -> np.ndarray:
    """Brownian levels from a CSV with a ``W`` column (or a single column)."""
    data = read_csv(path)
    if "W" in data:
        w = data["W"]
    elif len(data) == 1:
        w = next(iter(data.values()))
    else:
        raise PathFileError(f"{path}: no 'W' column among {list(data)}")
    if w.size == 0:
        raise PathFileError(f"{path}: no data rows")
    return w


def write_json(path, obj) -> Path:
    path = Path(path)
    with path.open("w", newline="\n") as fh:
        json.dump(obj, fh, indent=1, allow_nan=False)
        fh.write("\n")
    return path
