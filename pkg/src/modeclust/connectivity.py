"""Pairwise cluster connectivity from soft assignment vectors."""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCluster, InvalidInput


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    weight: float


@dataclass(frozen=True)
class ConnectivityMatrix:
    omega: np.ndarray  # (k, k) symmetric, zero diagonal
    edges: tuple = ()


def connectivity_matrix(a, labels, omega0=None):
    """Average cross-cluster soft mass between every pair of hard clusters.

    ``omega[i, j]`` is the mean of the two directed averages: the mean weight
    that points of cluster ``i`` place on cluster ``j``, and vice versa.

    Parameters
    ----------
    a : SoftAssignment or (n, k) array
    labels : ClusterAssignment or (n,) int array
    omega0 : float, optional
        If given, the edge set is filled in with ``edge_set``.
    """
    a = np.asarray(getattr(a, "a", a), dtype=float)
    labels = np.asarray(getattr(labels, "labels", labels))
    if a.ndim != 2 or labels.shape != (a.shape[0],):
        raise InvalidInput(f"soft assignment {a.shape} does not match {labels.shape[0]} labels")
    k = a.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise InvalidInput("labels reference clusters outside the soft assignment columns")
    counts = np.bincount(labels, minlength=k)
    if (counts == 0).any():
        raise EmptyCluster(f"cluster(s) {np.flatnonzero(counts == 0).tolist()} have no points")
    # directed[i, j]: mean a_j over points hard-labelled i
    directed = np.zeros((k, k))
    np.add.at(directed, labels, a)
    directed /= counts[:, None]
    omega = 0.5 * (directed + directed.T)
    np.fill_diagonal(omega, 0.0)
    cm = ConnectivityMatrix(omega=omega)
    if omega0 is not None:
        cm = ConnectivityMatrix(omega=omega, edges=tuple(edge_set(cm, omega0)))
    return cm


def edge_set(cm, omega0):
    """Cluster pairs ``i < j`` whose connectivity strictly exceeds ``omega0``."""
    if not 0 < omega0 < 1:
        raise InvalidInput(f"omega0 must lie in (0, 1), got {omega0}")
    omega = np.asarray(getattr(cm, "omega", cm))
    i, j = np.nonzero(np.triu(omega > omega0, k=1))
    return [Edge(int(p), int(q), float(omega[p, q])) for p, q in zip(i, j)]
