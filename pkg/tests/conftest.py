import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20140915)


def brute_density(x, data, h):
    """Direct double loop over the KDE definition."""
    data = np.atleast_2d(data)
    n, d = data.shape
    total = 0.0
    for xi in data:
        u2 = sum((a - b) ** 2 for a, b in zip(x, xi)) / h**2
        total += (2 * np.pi) ** (-d / 2) * np.exp(-u2 / 2)
    return total / (n * h**d)
