"""Small-cluster diagnostics (SC-plot) and reduced-dataset denoising."""

import logging
from dataclasses import dataclass

import numpy as np

from . import kde, meanshift
from .errors import AllClustersInsignificant

logger = logging.getLogger(__name__)

MAX_ROUNDS = 10


@dataclass(frozen=True)
class SCPlotData:
    sorted_sizes: tuple
    threshold: float

    @property
    def n_significant(self):
        return sum(1 for s in self.sorted_sizes if s >= self.threshold)


@dataclass(frozen=True)
class DenoiseReport:
    rounds: int
    forced: bool  # residual tiny-cluster points were force-assigned
    removed_sizes: tuple  # sizes of the clusters dropped in each round


def sc_plot(assign, n0):
    sizes = sorted((int(s) for s in assign.sizes), reverse=True)
    return SCPlotData(sorted_sizes=tuple(sizes), threshold=float(n0))


def denoise(model, assign, n0, modes=None, max_rounds=MAX_ROUNDS):
    """Merge points of clusters smaller than ``n0`` into significant clusters.

    Each round drops the points of insignificant clusters, rebuilds the KDE on
    the remaining ("reduced") data with the same bandwidth, and re-clusters all
    ``n`` points under it. After ``max_rounds`` any point still sitting in a
    tiny cluster goes to the nearest significant mode.

    Returns ``(ModeSet, ClusterAssignment, DenoiseReport)``. If nothing is
    insignificant the input is returned unchanged (``modes`` is then required
    to rebuild the ModeSet; pass the one that came with ``assign``).
    """
    sizes = np.asarray(assign.sizes)
    if not (sizes >= n0).any():
        raise AllClustersInsignificant(f"no cluster reaches the size threshold n0={n0:.4g} (largest: {sizes.max()})")
    if (sizes >= n0).all():
        if modes is None:
            modes = _modes_from(assign)
        return modes, assign, DenoiseReport(rounds=0, forced=False, removed_sizes=())

    x_all = model.x
    current = assign
    removed = []
    rounds = 0
    cur_modes = modes
    while rounds < max_rounds:
        sizes = np.asarray(current.sizes)
        small = sizes < n0
        if not small.any():
            break
        rounds += 1
        removed.append(tuple(int(s) for s in sizes[small]))
        keep = ~small[current.labels]
        if not keep.any():
            raise AllClustersInsignificant(f"round {rounds}: every cluster fell below n0={n0:.4g}")
        reduced = kde.DensityModel(x_all[keep], model.h)
        cur_modes, current = meanshift.cluster(reduced, starts=x_all)
        logger.info("denoise round %d: %d clusters, sizes %s", rounds, cur_modes.k, list(current.sizes))

    sizes = np.asarray(current.sizes)
    small = sizes < n0
    forced = bool(small.any())
    if forced:
        if not (~small).any():
            raise AllClustersInsignificant(f"no significant cluster left after {rounds} rounds")
        big = np.flatnonzero(~small)
        labels = current.labels.copy()
        tiny_pts = np.flatnonzero(small[labels])
        labels[tiny_pts] = big[np.argmin(kde.sq_distances(x_all[tiny_pts], cur_modes.modes[big]), axis=1)]
        remap = np.full(cur_modes.k, -1)
        remap[big] = np.arange(big.size)
        modes_arr = cur_modes.modes[big]
        labels, modes_arr = meanshift._order_by_size(remap[labels], modes_arr)
        cur_modes = meanshift.ModeSet(modes=modes_arr)
        current = meanshift.ClusterAssignment(
            labels=labels,
            destinations=current.destinations,
            sizes=np.bincount(labels, minlength=modes_arr.shape[0]),
            unconverged=current.unconverged,
            saddle_points=current.saddle_points,
        )
        logger.warning("denoise: force-assigned %d point(s) after %d rounds", tiny_pts.size, rounds)
    return cur_modes, current, DenoiseReport(rounds=rounds, forced=forced, removed_sizes=tuple(removed))


def _modes_from(assign):
    k = len(assign.sizes)
    return meanshift.ModeSet(
        modes=np.array([assign.destinations[assign.labels == j].mean(axis=0) for j in range(k)])
    )
