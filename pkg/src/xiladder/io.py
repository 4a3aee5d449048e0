"""Deterministic CSV/JSON table output.

Floats are rendered with 12 significant digits so repeated runs produce
byte-identical files on any platform; files are written to a temporary name
and atomically renamed, so readers never observe partial output.
"""

from __future__ import annotations

import json
import os
import tempfile


def fmt(value) -> str:
    """Render one cell: floats at 12 significant digits, everything else via str."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(cell) for cell in row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def write_json(path: str, header: list[str], rows) -> None:
    """Mirror of the CSV table: a list of records keyed by the header."""
    records = []
    for row in rows:
        rec = {}
        for key, cell in zip(header, row):
            rec[key] = cell
        records.append(rec)
    _atomic_write(path, json.dumps(records, indent=1) + "\n")


def write_table(path: str, header: list[str], rows, fmt_name: str = "csv") -> str:
    """Write rows as CSV or JSON depending on ``fmt_name``; returns the path."""
    rows = list(rows)
    if fmt_name == "csv":
        write_csv(path, header, rows)
    elif fmt_name == "json":
        write_json(path, header, rows)
    else:
        raise ValueError(f"unknown output format {fmt_name!r}")
    return path
