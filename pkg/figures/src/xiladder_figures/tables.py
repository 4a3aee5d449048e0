"""Schema-checked readers for the xiladder CSV tables."""

from __future__ import annotations

import csv

import numpy as np


class SchemaError(Exception):
    """An input table does not carry the columns its figure needs."""


SCHEMAS = {
    "phase": ["mu12", "mu23", "M"],
    "triple": ["mu12", "mu23", "labels"],
    "sweep": ["lambda", "mu12", "mu23", "M", "E", "F", "chi"],
    "spectrum": ["M", "k", "E"],
    "thermo": ["mu12", "M", "E"],
    "expect": ["k", "E", "A11", "A22", "A33", "nphot"],
    "photons": ["nu", "P"],
}


def read_table(path: str, schema: str) -> dict:
    """Read a CSV into a dict of numpy arrays, validating the column set.

    Non-numeric columns (the triple table's ``labels``) stay as string
    arrays; empty cells become NaN.  Raises SchemaError naming the first
    missing column.
    """
    required = SCHEMAS[schema]
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration as exc:
            raise SchemaError(f"{path}: empty file, expected header {required}") from exc
        for column in required:
            if column not in header:
                raise SchemaError(
                    f"{path}: missing column {column!r} (schema {schema!r} needs {required})"
                )
        rows = [row for row in reader if row]
    table: dict = {}
    for column in required:
        idx = header.index(column)
        cells = [row[idx] for row in rows]
        if column == "labels":
            table[column] = np.array(cells, dtype=object)
        else:
            table[column] = np.array(
                [float(c) if c != "" else np.nan for c in cells], dtype=float
            )
    return table
