"""Numeric CSV ingestion for fitting user-supplied data."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, ParseError, SchemaError


@dataclass
class Dataset:
    x: np.ndarray
    y: np.ndarray
    feature_names: list
    standardized: bool = False


def standardize_columns(x: np.ndarray, names=None) -> np.ndarray:
    """Center each column and divide by its sample standard deviation.

    Constant columns are only centered (they become all zeros) and a warning
    is issued naming them.
    """
    mean = x.mean(axis=0)
    std = x.std(axis=0, ddof=1)
    centered = x - mean
    constant = ~(std > 0)
    if constant.any():
        labels = [names[j] if names else str(j) for j in np.flatnonzero(constant)]
        warnings.warn(f"constant feature(s) {', '.join(labels)} left centered, not scaled", stacklevel=2)
    scale = np.where(constant, 1.0, std)
    out = centered / scale
    out[:, constant] = 0.0
    return out


def load_csv_dataset(path, target_column: str = "y", standardize: bool = False) -> Dataset:
    """Read a header-first numeric CSV; ``target_column`` becomes y and the
    remaining columns, in header order, become x.  Lines starting with ``#``
    are comments."""
    with open(path, newline="") as fh:
        numbered = [(no, line) for no, line in enumerate(fh, start=1)]
    numbered = [(no, line) for no, line in numbered if line.strip() and not line.lstrip().startswith("#")]
    if not numbered:
        raise SchemaError(f"{path}: file has no header")
    rows = list(csv.reader(line for _, line in numbered))
    header = [h.strip() for h in rows[0]]
    if target_column not in header:
        raise SchemaError(f"{path}: target column {target_column!r} not in header {header}")
    if len(header) < 2:
        raise SchemaError(f"{path}: need at least one feature column besides the target")

    values = np.empty((len(rows) - 1, len(header)))
    for i, ((line_no, _), row) in enumerate(zip(numbered[1:], rows[1:])):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", line=line_no)
        for j, cell in enumerate(row):
            try:
                values[i, j] = float(cell)
            except ValueError:
                raise ParseError(f"non-numeric cell {cell!r}", line=line_no, column=header[j]) from None
            if not np.isfinite(values[i, j]):
                raise ParseError(f"non-finite cell {cell!r}", line=line_no, column=header[j])
    if values.shape[0] < 2:
        raise DegenerateInputError(f"{path}: need at least 2 data rows, found {values.shape[0]}")

    t = header.index(target_column)
    names = [h for j, h in enumerate(header) if j != t]
    x = np.delete(values, t, axis=1)
    if standardize:
        x = standardize_columns(x, names)
    return Dataset(x=np.ascontiguousarray(x), y=values[:, t].copy(), feature_names=names, standardized=standardize)
