"""Soft cluster membership as absorption probabilities of a kernel random walk.

The chain has the ``k`` modes as absorbing states and the ``n`` data points as
transient states. From ``X_i`` it jumps to any point or mode with probability
proportional to the kernel weight. The probability of being absorbed at each
mode is ``(I - T)^{-1} S``.
"""

from dataclasses import dataclass

import numpy as np

from . import kde
from .errors import InvalidInput
from .numerics import solve_linear


@dataclass(frozen=True)
class SoftAssignment:
    a: np.ndarray  # (n, k), rows sum to one

    def hard_labels(self):
        return np.argmax(self.a, axis=1)


def _modes_array(modes):
    return np.atleast_2d(np.asarray(getattr(modes, "modes", modes), dtype=float))


def transition_blocks(model, modes):
    """Return ``(S, T)``: point-to-mode and point-to-point transition blocks.

    Row ``i`` of ``[S | T]`` is the kernel weights of ``X_i`` to every mode
    and every data point (itself included), normalized to sum to one.
    """
    m = _modes_array(modes)
    if m.shape[0] < 1:
        raise InvalidInput("need at least one mode")
    if m.shape[1] != model.d:
        raise InvalidInput(f"modes are {m.shape[1]}-d but data are {model.d}-d")
    x = model.x
    # the Gaussian normalizer cancels in the row normalization, but it is kept
    # so the blocks are literally K_h ratios
    ks = kde.kernel_matrix(x, m, model.h)
    kt = kde.kernel_matrix(x, x, model.h)
    kt = 0.5 * (kt + kt.T)
    total = ks.sum(axis=1, keepdims=True) + kt.sum(axis=1, keepdims=True)
    return ks / total, kt / total


def absorb(s, t):
    """Absorption probabilities ``(I - T)^{-1} S`` via one LU solve."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or s.shape[0] != t.shape[0]:
        raise InvalidInput(f"incompatible block shapes S{s.shape}, T{t.shape}")
    if (s.sum(axis=1) <= 0).any():
        raise InvalidInput("every transient state needs positive mass on the absorbing states")
    a = solve_linear(np.eye(t.shape[0]) - t, s)
    return SoftAssignment(a=np.clip(a, 0.0, 1.0))


def soft_assign(model, modes):
    return absorb(*transition_blocks(model, modes))
