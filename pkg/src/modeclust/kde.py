"""Gaussian kernel density estimator with exact gradient and Hessian."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput


def _as_data(data):
    x = getattr(data, "x", data)
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return x


def gaussian_profile(u, d):
    """Standard d-variate Gaussian kernel evaluated at radius ``u``."""
    return (2.0 * np.pi) ** (-d / 2.0) * np.exp(-0.5 * np.square(u))


@dataclass(frozen=True)
class DensityModel:
    """KDE ``p(x) = 1/(n h^d) sum_i K(|x - X_i| / h)`` with a Gaussian K.

    ``data`` may be a DataMatrix or a plain ``(n, d)`` array.
    """

    data: object
    h: float

    def __post_init__(self):
        if not (np.isfinite(self.h) and self.h > 0):
            raise InvalidInput(f"bandwidth must be positive, got {self.h}")
        x = _as_data(self.data)
        if x.shape[0] < 1:
            raise InvalidInput("density model needs at least one data point")
        object.__setattr__(self, "_x", x)

    @property
    def x(self):
        return self._x

    @property
    def n(self):
        return self._x.shape[0]

    @property
    def d(self):
        return self._x.shape[1]

    def _point(self, x):
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.d:
            raise InvalidInput(f"expected a {self.d}-vector, got length {x.shape[0]}")
        if not np.all(np.isfinite(x)):
            raise InvalidInput("evaluation point is not finite")
        return x

    def _kernels(self, x):
        diff = x[None, :] - self._x
        u2 = np.einsum("ij,ij->i", diff, diff) / self.h**2
        k = (2.0 * np.pi) ** (-self.d / 2.0) * np.exp(-0.5 * u2)
        return diff, k

    def _norm(self):
        return 1.0 / (self.n * self.h**self.d)


def density(model, x):
    x = model._point(x)
    _, k = model._kernels(x)
    return float(model._norm() * k.sum())


def gradient(model, x):
    x = model._point(x)
    diff, k = model._kernels(x)
    return -model._norm() / model.h**2 * (k[:, None] * diff).sum(axis=0)


def hessian(model, x):
    x = model._point(x)
    diff, k = model._kernels(x)
    h2 = model.h**2
    outer = np.einsum("i,ij,ik->jk", k, diff, diff) / h2**2
    return model._norm() * (outer - k.sum() / h2 * np.eye(model.d))


def kernel_weight(model, a, b):
    """``K(|a - b| / h)``; exactly symmetric in its arguments."""
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise InvalidInput("vectors differ in length")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise InvalidInput("kernel arguments must be finite")
    # squaring the difference makes the result independent of argument order
    dist2 = float(np.sum(np.square(a - b)))
    return float(gaussian_profile(np.sqrt(dist2) / model.h, a.shape[0]))


def kernel_matrix(a, b, h):
    """Matrix of ``K(|a_i - b_j| / h)`` for row sets ``a`` and ``b``."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    d2 = sq_distances(a, b)
    return gaussian_profile(np.sqrt(d2) / h, a.shape[1])


def sq_distances(a, b):
    """Pairwise squared Euclidean distances, clipped at zero."""
    d2 = a @ b.T
    d2 *= -2.0
    d2 += np.einsum("ij,ij->i", a, a)[:, None]
    d2 += np.einsum("ij,ij->i", b, b)[None, :]
    return np.maximum(d2, 0.0, out=d2)
