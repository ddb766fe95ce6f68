"""Reading and writing the JSON/CSV files exchanged between CLI stages.

JSON is UTF-8 with 2-space indentation; reals carry 9 significant digits.
"""

import csv
import json
import os

import numpy as np

from .connectivity import Edge
from .errors import InvalidInput, IoError


def _round_reals(obj):
    if isinstance(obj, dict):
        return {k: _round_reals(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_reals(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round_reals(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.9g}")
    return obj


def write_json(path, obj):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(_round_reals(obj), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def write_matrix_csv(path, m, header=None, decimals=6):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            if header is not None:
                w.writerow(header)
            for row in np.asarray(m):
                w.writerow([f"{v:.{decimals}f}" for v in row])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_matrix_csv(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        float(rows[0][0])
    except (ValueError, IndexError):
        rows = rows[1:]
    try:
        return np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise InvalidInput(f"{path}: non-numeric cell ({exc})") from exc


def soft_header(k):
    return [f"cluster{j + 1}" for j in range(k)]


def edges_to_json(edges):
    return [{"i": e.i, "j": e.j, "weight": e.weight} for e in edges]


def edges_from_json(items):
    return tuple(Edge(int(e["i"]), int(e["j"]), float(e["weight"])) for e in items)


def load_clusters(path):
    """Load a clustering result: a ``clusters.json`` file or a run directory
    holding ``labels.json`` and ``modes.json``."""
    if os.path.isdir(path):
        doc = read_json(os.path.join(path, "labels.json"))
        doc.update(read_json(os.path.join(path, "modes.json")))
    else:
        doc = read_json(path)
    for key in ("modes", "labels"):
        if key not in doc:
            raise InvalidInput(f"{path}: missing {key!r}")
    doc["modes"] = np.asarray(doc["modes"], dtype=float)
    doc["labels"] = np.asarray(doc["labels"], dtype=int)
    if doc["modes"].ndim != 2:
        raise InvalidInput(f"{path}: modes must be a list of vectors")
    return doc
