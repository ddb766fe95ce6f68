import numpy as np
import pytest
from scipy import integrate

from modeclust import kde
from modeclust.errors import InvalidInput
from conftest import brute_density


def central_diff(f, x, step=1e-5):
    g = np.zeros_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = step
        g[j] = (f(x + e) - f(x - e)) / (2 * step)
    return g


def test_single_point_peak():
    m = kde.DensityModel(np.zeros((1, 1)), 1.0)
    assert kde.density(m, [0.0]) == pytest.approx(0.398942, abs=1e-6)


def test_symmetric_pair():
    m = kde.DensityModel(np.array([[-1.0], [1.0]]), 1.0)
    assert kde.density(m, [0.0]) == pytest.approx(np.exp(-0.5) / np.sqrt(2 * np.pi), rel=1e-12)
    assert kde.density(m, [0.0]) == pytest.approx(0.241971, abs=1e-6)


def test_matches_brute_force(rng):
    data = rng.normal(size=(20, 3))
    m = kde.DensityModel(data, 0.7)
    for x in rng.normal(size=(5, 3)):
        assert kde.density(m, x) == pytest.approx(brute_density(x, data, 0.7), rel=1e-12)


def test_integrates_to_one_2d(rng):
    data = rng.normal(size=(50, 2))
    m = kde.DensityModel(data, 0.5)
    lo, hi = data.min(axis=0) - 5 * 0.5, data.max(axis=0) + 5 * 0.5
    gx = np.linspace(lo[0], hi[0], 241)
    gy = np.linspace(lo[1], hi[1], 241)
    vals = np.array([[kde.density(m, [a, b]) for b in gy] for a in gx])
    total = integrate.trapezoid(integrate.trapezoid(vals, gy, axis=1), gx)
    assert total == pytest.approx(1.0, abs=1e-2)


def test_integrates_to_one_1d(rng):
    data = rng.normal(size=(30, 1))
    h = 0.4
    m = kde.DensityModel(data, h)
    total, _ = integrate.quad(lambda t: kde.density(m, [t]), data.min() - 5 * h, data.max() + 5 * h, limit=200)
    assert total == pytest.approx(1.0, abs=1e-3)


def test_gradient_zero_at_single_point():
    m = kde.DensityModel(np.zeros((1, 2)), 1.0)
    np.testing.assert_array_equal(kde.gradient(m, [0.0, 0.0]), [0.0, 0.0])


def test_gradient_finite_difference_pair():
    m = kde.DensityModel(np.array([[-1.0], [1.0]]), 1.0)
    x = np.array([0.5])
    fd = central_diff(lambda p: kde.density(m, p), x)
    assert abs(kde.gradient(m, x)[0] - fd[0]) < 1e-6


@pytest.mark.parametrize("d", [1, 2, 8])
def test_gradient_finite_difference_random(rng, d):
    data = rng.normal(size=(40, d))
    m = kde.DensityModel(data, 0.9)
    for x in rng.normal(size=(20, d)):
        fd = central_diff(lambda p: kde.density(m, p), x)
        assert np.abs(kde.gradient(m, x) - fd).max() < 1e-6


def test_gradient_points_to_mass(rng):
    data = rng.normal(size=(30, 2))
    m = kde.DensityModel(data, 1.0)
    x = np.array([6.0, -5.0])
    fd = central_diff(lambda p: kde.density(m, p), x, step=1e-4)
    g = kde.gradient(m, x)
    assert g @ (data.mean(axis=0) - x) > 0
    assert fd @ (data.mean(axis=0) - x) > 0


def test_hessian_finite_difference(rng):
    data = rng.normal(size=(25, 3))
    m = kde.DensityModel(data, 0.8)
    x = rng.normal(size=3)
    fd = np.column_stack([central_diff(lambda p: kde.gradient(m, p)[j], x) for j in range(3)])
    np.testing.assert_allclose(kde.hessian(m, x), fd, atol=1e-6)


def test_kernel_weight():
    m = kde.DensityModel(np.zeros((1, 1)), 2.0)
    assert kde.kernel_weight(m, [1.0], [1.0]) == pytest.approx((2 * np.pi) ** -0.5)
    assert kde.kernel_weight(m, [0.0], [2.0]) == pytest.approx(0.241971, abs=1e-6)


def test_kernel_weight_symmetric(rng):
    m = kde.DensityModel(np.zeros((1, 4)), 0.3)
    for a, b in rng.normal(size=(20, 2, 4)):
        assert kde.kernel_weight(m, a, b) == kde.kernel_weight(m, b, a)


def test_permutation_invariant(rng):
    data = rng.normal(size=(30, 2))
    x = rng.normal(size=2)
    a = kde.density(kde.DensityModel(data, 0.6), x)
    b = kde.density(kde.DensityModel(data[rng.permutation(30)], 0.6), x)
    assert a == pytest.approx(b, rel=1e-13)


def test_invalid():
    with pytest.raises(InvalidInput):
        kde.DensityModel(np.zeros((3, 1)), 0.0)
    m = kde.DensityModel(np.zeros((3, 2)), 1.0)
    with pytest.raises(InvalidInput):
        kde.density(m, [np.inf, 0.0])
    with pytest.raises(InvalidInput):
        kde.gradient(m, [0.0])
