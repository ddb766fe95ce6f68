"""CSV ingestion and column standardization."""

import csv
import logging
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import DegenerateColumn, EmptyDataset, InvalidInput, IoError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DataMatrix:
    """An ``n x d`` observation matrix plus the column statistics of its source.

    ``col_mean`` and ``col_sd`` always describe the *original* (unscaled)
    columns so that a standardized matrix can be mapped back.
    """

    x: np.ndarray
    col_mean: np.ndarray
    col_sd: np.ndarray
    columns: tuple = ()
    labels: Optional[tuple] = None
    standardized: bool = False
    rejected_rows: tuple = field(default=())

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def d(self):
        return self.x.shape[1]

    def mean_sd(self):
        """Average of the per-column sample standard deviations of ``x`` itself."""
        return float(np.mean(np.std(self.x, axis=0, ddof=1)))


def from_array(x, labels=None, columns=None):
    """Build a validated DataMatrix from an in-memory array."""
    x = np.array(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise InvalidInput(f"expected a 2-d array, got {x.ndim}-d")
    if x.shape[0] == 0:
        raise EmptyDataset("no rows")
    if x.shape[0] < 2:
        raise InvalidInput("need at least two observations")
    if x.shape[1] < 1:
        raise InvalidInput("need at least one feature column")
    if not np.all(np.isfinite(x)):
        raise InvalidInput("data contains non-finite values")
    if columns is None:
        columns = tuple(f"x{j + 1}" for j in range(x.shape[1]))
    columns = tuple(columns)
    if labels is not None:
        labels = tuple(str(v) for v in labels)
        if len(labels) != x.shape[0]:
            raise InvalidInput("labels length does not match the number of rows")
    sd = np.std(x, axis=0, ddof=1)
    for j, s in enumerate(sd):
        if not s > 0:
            raise DegenerateColumn(columns[j])
    x.setflags(write=False)
    return DataMatrix(x=x, col_mean=x.mean(axis=0), col_sd=sd, columns=columns, labels=labels)


def _is_number(cell):
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, label_column=None, drop_columns=()):
    """Read a comma-separated file into a DataMatrix.

    The first line is treated as a header when any of its cells fails to parse
    as a number. ``label_column`` is kept aside as ground truth and
    ``drop_columns`` are ignored; neither counts as a feature. Data rows whose
    feature cells are not all numeric are skipped; their 0-based data-row
    indices are kept in ``rejected_rows`` and logged.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise IoError(f"{path} is not valid UTF-8") from exc
    if not rows:
        raise EmptyDataset(f"{path} is empty")

    header = None
    if not all(_is_number(c) for c in rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]

    width = len(header) if header else len(rows[0]) if rows else 0
    label_idx = None
    if label_column is not None:
        if header is None:
            raise InvalidInput(f"label column {label_column!r} requested but the file has no header")
        if label_column not in header:
            raise InvalidInput(f"label column {label_column!r} not found in header {header}")
        label_idx = header.index(label_column)
    dropped = set()
    for name in drop_columns or ():
        if header is None or name not in header:
            raise InvalidInput(f"column {name!r} to drop not found in header")
        dropped.add(header.index(name))
    feature_idx = [j for j in range(width) if j != label_idx and j not in dropped]
    if not feature_idx:
        raise InvalidInput("no feature columns left")
    columns = [header[j] for j in feature_idx] if header else [f"x{j + 1}" for j in feature_idx]

    values, labels, rejected = [], [], []
    for i, row in enumerate(rows):
        cells = [c.strip() for c in row]
        if len(cells) != width:
            rejected.append(i)
            continue
        try:
            feats = [float(cells[j]) for j in feature_idx]
        except ValueError:
            rejected.append(i)
            continue
        if not all(np.isfinite(feats)):
            rejected.append(i)
            continue
        values.append(feats)
        if label_idx is not None:
            labels.append(cells[label_idx])
    if rejected:
        logger.warning("%s: rejected %d non-numeric row(s) at data-row indices %s", path, len(rejected), rejected)
    if not values:
        raise EmptyDataset(f"{path} has no usable numeric rows")

    dm = from_array(np.array(values), labels=labels if label_idx is not None else None, columns=columns)
    return replace(dm, rejected_rows=tuple(rejected))


def standardize(dm):
    """Z-score every column (sample sd, divisor n-1).

    Standardizing an already-standardized matrix is a no-op up to rounding;
    the original column statistics are carried over unchanged.
    """
    mean = dm.x.mean(axis=0)
    sd = np.std(dm.x, axis=0, ddof=1)
    for j, s in enumerate(sd):
        if not s > 0:
            raise DegenerateColumn(dm.columns[j] if dm.columns else j)
    z = (dm.x - mean) / sd
    z.setflags(write=False)
    return replace(dm, x=z, standardized=True)


def write_csv(path, x, labels=None, columns=None, label_column="label"):
    x = np.asarray(x, dtype=float)
    if columns is None:
        columns = [f"x{j + 1}" for j in range(x.shape[1])]
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(list(columns) + ([label_column] if labels is not None else []))
            for i, row in enumerate(x):
                cells = [repr(float(v)) for v in row]
                if labels is not None:
                    cells.append(str(labels[i]))
                w.writerow(cells)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
