"""CSV ingestion and output writers."""

import csv
import math
from pathlib import Path

import numpy as np

from .errors import EmptyAfterCleaning, MissingColumn
from .stack import Dataset

MISSING = {"", "na", "nan", "null", "none", "?"}


def _to_float(cell):
    if cell.strip().lower() in MISSING:
        return None
    try:
        v = float(cell)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def load_csv(path, response: str) -> tuple[Dataset, int]:
    """Read a headed CSV into a :class:`Dataset`.

    A column counts as numeric when most of its non-missing cells parse as
    finite numbers; any other column is categorical and is one-hot encoded
    with categories in sorted order (one indicator per category). Rows with a
    missing cell, or a non-numeric cell in a numeric column, are dropped.

    Returns the dataset and the number of dropped rows.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyAfterCleaning(f"{path} is empty") from None
        rows = [r for r in reader if any(c.strip() for c in r)]
    if response not in header:
        raise MissingColumn(f"response column {response!r} not in {path.name}")
    rows = [r + [""] * (len(header) - len(r)) for r in rows]

    numeric = []
    for j, name in enumerate(header):
        present = [r[j] for r in rows if r[j].strip().lower() not in MISSING]
        n_num = sum(_to_float(c) is not None for c in present)
        numeric.append(name == response or (present and 2 * n_num > len(present)))

    keep = []
    for r in rows:
        ok = True
        for j in range(len(header)):
            cell = r[j]
            if numeric[j]:
                ok = _to_float(cell) is not None
            else:
                ok = cell.strip().lower() not in MISSING
            if not ok:
                break
        if ok:
            keep.append(r)
    dropped = len(rows) - len(keep)
    if not keep:
        raise EmptyAfterCleaning(f"no complete rows left in {path.name} ({dropped} dropped)")

    columns, features = [], []
    for j, name in enumerate(header):
        if name == response:
            continue
        if numeric[j]:
            columns.append(name)
            features.append(np.array([float(r[j]) for r in keep]))
        else:
            values = [r[j].strip() for r in keep]
            for cat in sorted(set(values)):
                columns.append(f"{name}={cat}")
                features.append(np.array([v == cat for v in values], dtype=np.float64))
    if not features:
        raise EmptyAfterCleaning(f"{path.name} has no feature columns")
    y = np.array([float(r[header.index(response)]) for r in keep])
    X = np.column_stack(features)
    return Dataset(X, y, tuple(columns), path.stem), dropped


def _cell(v):
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path, fields, records) -> None:
    """Write dict records with a fixed header; floats use their exact repr."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for rec in records:
            w.writerow([_cell(rec[f]) for f in fields])


def write_dataset(path, data: Dataset, response: str = "y") -> None:
    fields = [*data.columns, response]
    records = [dict(zip(fields, [*map(float, x), float(t)])) for x, t in zip(data.X, data.y)]
    write_csv(path, fields, records)
