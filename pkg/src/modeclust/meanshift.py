"""Gaussian mean-shift mode finding and basin-of-attraction clustering."""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage

from . import kde
from .errors import InvalidInput, NonConvergence

logger = logging.getLogger(__name__)

TOL_FACTOR = 1e-7  # step tolerance, in units of h
MAX_ITER = 500
MERGE_FACTOR = 0.1  # merge radius, in units of h
CHUNK = 256


@dataclass(frozen=True)
class ModeSet:
    modes: np.ndarray  # (k, d)

    @property
    def k(self):
        return self.modes.shape[0]


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray  # (n,) int, values in [0, k)
    destinations: np.ndarray  # (n, d) converged ascent endpoints
    sizes: np.ndarray  # (k,)
    unconverged: tuple = field(default=())  # indices that hit max_iter
    saddle_points: tuple = field(default=())  # indices whose ascent stalled off a mode


def _shift(x, data, h):
    """One mean-shift update for every row of ``x``."""
    w = kde.sq_distances(x, data)
    # shift exponents per row: the weighted mean is invariant and far points
    # no longer underflow to an all-zero weight vector
    w -= w.min(axis=1, keepdims=True)
    w *= -0.5 / h**2
    np.exp(w, out=w)
    return (w @ data) / w.sum(axis=1, keepdims=True)


def ascend_many(model, starts, tol=None, max_iter=MAX_ITER):
    """Run mean shift from each row of ``starts``.

    Returns ``(points, converged)``; rows that did not converge hold their
    last iterate.
    """
    h = model.h
    tol = TOL_FACTOR * h if tol is None else tol
    pts = np.array(starts, dtype=float, copy=True)
    if pts.ndim == 1:
        pts = pts[None, :]
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("starting points must be finite")
    # iterate in centered coordinates: the expanded-form distances in _shift
    # lose precision when the data sit far from the origin
    center = model.x.mean(axis=0)
    data = model.x - center
    pts -= center
    converged = np.zeros(pts.shape[0], dtype=bool)
    active = np.arange(pts.shape[0])
    for _ in range(max_iter):
        if active.size == 0:
            break
        still = []
        for lo in range(0, active.size, CHUNK):
            idx = active[lo:lo + CHUNK]
            new = _shift(pts[idx], data, h)
            step = np.sqrt(np.sum((new - pts[idx]) ** 2, axis=1))
            pts[idx] = new
            done = step < tol
            converged[idx[done]] = True
            still.append(idx[~done])
        active = np.concatenate(still)
    return pts + center, converged


def ascend(model, x0, tol=None, max_iter=MAX_ITER):
    """Mean-shift ascent from a single point to a stationary point of the KDE."""
    pts, ok = ascend_many(model, np.asarray(x0, dtype=float).reshape(1, -1), tol, max_iter)
    if not ok[0]:
        raise NonConvergence(f"mean shift did not converge in {max_iter} iterations", last_iterate=pts[0])
    return pts[0]


def mean_shift_vector(model, x):
    """``m(x) - x``, proportional to ``grad p / p`` (scale-free stationarity check)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return _shift(x, model.x, model.h) - x


def _is_local_max(model, point):
    eig = np.linalg.eigvalsh(kde.hessian(model, point))
    return bool(eig.max() < 0)


def _group(points, radius):
    if points.shape[0] == 1:
        return np.zeros(1, dtype=int)
    tree = linkage(points, method="single")
    return fcluster(tree, t=radius, criterion="distance") - 1


def _nearest(points, centers):
    # argmin picks the lowest index on ties
    return np.argmin(kde.sq_distances(points, centers), axis=1)


def cluster(model, starts=None, merge_radius=None, tol=None, max_iter=MAX_ITER):
    """Mean-shift clustering of the model's data points.

    Every point is moved uphill to a stationary point of the KDE; endpoints
    closer than ``merge_radius`` (single linkage) are one mode. Stationary
    points that are not local maxima (saddles) and points that fail to
    converge are given to the nearest genuine mode. Modes are ordered by
    descending cluster size, ties broken by the first member's index.

    ``starts`` defaults to the model's own data points; pass another array to
    label a different point set under this density.
    """
    h = model.h
    radius = MERGE_FACTOR * h if merge_radius is None else merge_radius
    starts = model.x if starts is None else np.asarray(starts, dtype=float)
    n = starts.shape[0]
    dest, ok = ascend_many(model, starts, tol, max_iter)
    if not ok.any():
        raise NonConvergence("no ascent converged", last_iterate=dest)
    unconverged = np.flatnonzero(~ok)
    if unconverged.size:
        logger.warning("%d point(s) did not converge within %d iterations", unconverged.size, max_iter)

    conv = np.flatnonzero(ok)
    groups = _group(dest[conv], radius)
    n_groups = groups.max() + 1
    centers = np.array([dest[conv][groups == g].mean(axis=0) for g in range(n_groups)])
    is_max = np.array([_is_local_max(model, c) for c in centers])
    if not is_max.any():
        # degenerate (e.g. flat) density: keep every stationary point
        is_max[:] = True
    saddle_members = conv[~is_max[groups]]
    if saddle_members.size:
        logger.info("%d point(s) converged to non-maximal stationary points", saddle_members.size)

    keep = np.flatnonzero(is_max)
    modes = centers[keep]
    group_to_mode = np.full(n_groups, -1)
    group_to_mode[keep] = np.arange(keep.size)

    labels = np.empty(n, dtype=int)
    labels[conv] = group_to_mode[groups]
    orphan = np.concatenate([saddle_members, unconverged]).astype(int)
    if orphan.size:
        labels[orphan] = _nearest(dest[orphan], modes)

    labels, modes = _order_by_size(labels, modes)
    sizes = np.bincount(labels, minlength=modes.shape[0])
    return ModeSet(modes=modes), ClusterAssignment(
        labels=labels,
        destinations=dest,
        sizes=sizes,
        unconverged=tuple(int(i) for i in unconverged),
        saddle_points=tuple(int(i) for i in sorted(saddle_members)),
    )


def _order_by_size(labels, modes):
    k = modes.shape[0]
    sizes = np.bincount(labels, minlength=k)
    first = np.full(k, labels.size)
    seen = np.unique(labels, return_index=True)
    first[seen[0]] = seen[1]
    # empty modes (possible only when every member was reassigned) are dropped
    order = [j for j in sorted(range(k), key=lambda j: (-sizes[j], first[j])) if sizes[j] > 0]
    remap = np.full(k, -1)
    remap[order] = np.arange(len(order))
    return remap[labels], modes[order]
