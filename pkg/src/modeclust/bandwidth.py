"""Reference rules for the smoothing bandwidth, the cluster-size threshold
and the connectivity-edge threshold."""

import math
from dataclasses import dataclass

from .errors import InvalidInput

DEFAULT_RHO0 = 5.0


@dataclass(frozen=True)
class PipelineParams:
    h: float
    n0: float
    rho0: float = DEFAULT_RHO0
    omega0: float = 0.5

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidInput(f"h must be positive, got {self.h}")
        if not self.n0 >= 1:
            raise InvalidInput(f"n0 must be at least 1, got {self.n0}")
        if not self.rho0 >= 1:
            raise InvalidInput(f"rho0 must be at least 1, got {self.rho0}")
        if not 0 < self.omega0 < 1:
            raise InvalidInput(f"omega0 must lie in (0, 1), got {self.omega0}")


def normal_reference_h(n, d, mean_sd):
    """Normal reference bandwidth targeted at density-gradient estimation.

    ``mean_sd * (4 / (d + 4)) ** (1 / (d + 6)) * n ** (-1 / (d + 6))`` where
    ``mean_sd`` is the average per-coordinate sample standard deviation.
    """
    if n < 2 or d < 1:
        raise InvalidInput(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    if not mean_sd > 0:
        raise InvalidInput(f"mean_sd must be positive, got {mean_sd}")
    p = 1.0 / (d + 6)
    return mean_sd * (4.0 / (d + 4)) ** p * n ** (-p)


def denoise_threshold(n, d):
    """Minimum size of a significant cluster: ``(n ln n / 20) ** (d / (d + 6))``."""
    if n < 2 or d < 1:
        raise InvalidInput(f"need n >= 2 and d >= 1, got n={n}, d={d}")
    return (n * math.log(n) / 20.0) ** (d / (d + 6.0))


def default_omega0(k):
    if k < 1:
        raise InvalidInput(f"cluster count must be positive, got {k}")
    return 1.0 / (2.0 * k)
