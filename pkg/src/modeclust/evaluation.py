"""Confusion tables and the adjusted Rand index."""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidInput


@dataclass(frozen=True)
class ContingencyTable:
    counts: np.ndarray  # (r, c): true classes x clusters
    row_labels: tuple
    col_labels: tuple

    @property
    def row_totals(self):
        return self.counts.sum(axis=1)

    @property
    def col_totals(self):
        return self.counts.sum(axis=0)

    @property
    def n(self):
        return int(self.counts.sum())

    def to_text(self):
        head = [""] + [str(c) for c in self.col_labels]
        rows = [head] + [[str(r)] + [str(v) for v in row] for r, row in zip(self.row_labels, self.counts)]
        widths = [max(len(r[j]) for r in rows) for j in range(len(head))]
        lines = []
        for r in rows:
            cells = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
            lines.append("  ".join(cells))
        return "\n".join(lines)

    def to_csv(self):
        lines = [",".join(["class"] + [str(c) for c in self.col_labels])]
        for r, row in zip(self.row_labels, self.counts):
            lines.append(",".join([str(r)] + [str(int(v)) for v in row]))
        return "\n".join(lines) + "\n"


def _check_pair(a, b):
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise InvalidInput(f"label vectors differ in length ({len(a)} vs {len(b)})")
    return a, b


def confusion(labels_true, labels_pred):
    """Cross-tabulate true classes (rows, first-appearance order) against
    predicted clusters (columns, sorted)."""
    t, p = _check_pair(labels_true, labels_pred)
    rows = list(dict.fromkeys(t))
    cols = sorted(set(p))
    ri = {v: i for i, v in enumerate(rows)}
    ci = {v: j for j, v in enumerate(cols)}
    counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for a, b in zip(t, p):
        counts[ri[a], ci[b]] += 1
    return ContingencyTable(counts=counts, row_labels=tuple(rows), col_labels=tuple(cols))


def adjusted_rand(labels_a, labels_b):
    """Hubert-Arabie adjusted Rand index.

    Computed in exact integer arithmetic with one final division, so the
    result is the correctly rounded value of the rational index. Two
    partitions that are both trivial (one block, or all singletons) score 1.
    """
    a, b = _check_pair(labels_a, labels_b)
    n = len(a)
    if n < 2:
        raise InvalidInput("adjusted Rand index needs at least two items")
    table = confusion(a, b).counts
    index = sum(comb(int(v), 2) for v in table.ravel())
    sum_a = sum(comb(int(v), 2) for v in table.sum(axis=1))
    sum_b = sum(comb(int(v), 2) for v in table.sum(axis=0))
    pairs = comb(n, 2)
    # (index - sum_a*sum_b/pairs) / ((sum_a+sum_b)/2 - sum_a*sum_b/pairs), scaled by 2*pairs
    num = 2 * (index * pairs - sum_a * sum_b)
    den = (sum_a + sum_b) * pairs - 2 * sum_a * sum_b
    if den == 0:
        return 1.0
    return num / den
