"""CSV and key-value text records with a fixed, locale-free number format."""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .loops import TOTAL, WorkLoop, import_loop

LOOP_HEADER = ("x", "f_upper", "f_lower")
TIMESERIES_HEADER = ("t", "x", "load")


def fmt(value) -> str:
    """15 significant digits, '.' separator; booleans as true/false."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        out = f"{v:.15g}"
        return "0" if out == "-0" else out
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def export_loop_csv(loop: WorkLoop, path) -> None:
    write_csv(path, LOOP_HEADER, zip(loop.x_grid, loop.upper, loop.lower))


def export_timeseries_csv(loop: WorkLoop, path) -> None:
    if loop.times is None:
        raise ValueError("loop has no source time series")
    write_csv(path, TIMESERIES_HEADER, zip(loop.times, loop.xs, loop.loads))


def read_loop_rows(path) -> list[tuple[float, float, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != LOOP_HEADER:
            raise ValueError(f"{path}: expected header {','.join(LOOP_HEADER)}")
        return [tuple(float(v) for v in row) for row in reader if row]


def import_loop_csv(path, branch_kind: str = TOTAL) -> WorkLoop:
    return import_loop(read_loop_rows(path), branch_kind)


def format_record(record: dict) -> str:
    return "".join(f"{k}={fmt(v)}\n" for k, v in record.items())


def write_record(path, record: dict) -> None:
    Path(path).write_text(format_record(record), encoding="utf-8")


def read_record(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            k, _, v = line.partition("=")
            out[k] = v
    return out
