import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from modeclust.errors import InvalidInput, SingularSystem
from modeclust.numerics import solve_linear, sym_eigen


def test_identity_eigen():
    eig = sym_eigen(np.eye(3))
    np.testing.assert_allclose(eig.values, [1, 1, 1])
    np.testing.assert_allclose(eig.vectors.T @ eig.vectors, np.eye(3), atol=1e-12)


def test_diagonal_eigen():
    eig = sym_eigen(np.diag([1.0, 3.0]))
    np.testing.assert_allclose(eig.values, [3, 1])
    np.testing.assert_allclose(eig.vectors, [[0, 1], [1, 0]], atol=1e-14)


def test_random_reconstruction(rng):
    a = rng.normal(size=(5, 5))
    m = a + a.T
    eig = sym_eigen(m)
    recon = eig.vectors @ np.diag(eig.values) @ eig.vectors.T
    np.testing.assert_allclose(recon, m, atol=1e-8)
    assert np.all(np.diff(eig.values) <= 0)
    np.testing.assert_allclose(eig.vectors.T @ eig.vectors, np.eye(5), atol=1e-8)


def test_sign_convention(rng):
    a = rng.normal(size=(6, 6))
    eig = sym_eigen(a @ a.T)
    for v in eig.vectors.T:
        assert v[np.argmax(np.abs(v))] >= 0


def test_sign_deterministic_under_negation(rng):
    # flipping the input's eigenvector signs cannot be observed in the output
    a = rng.normal(size=(4, 4))
    m = a + a.T
    first = sym_eigen(m).vectors
    second = sym_eigen(m.copy()).vectors
    np.testing.assert_array_equal(first, second)


def test_rejects_non_finite_and_asymmetric():
    with pytest.raises(InvalidInput):
        sym_eigen(np.array([[1.0, np.nan], [np.nan, 1.0]]))
    with pytest.raises(InvalidInput):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))


symmetric = arrays(np.float64, (4, 4), elements=st.floats(-10, 10)).map(lambda a: a + a.T)


@settings(max_examples=60, deadline=None)
@given(symmetric)
def test_eigen_properties(m):
    eig = sym_eigen(m)
    scale = max(np.abs(m).max(), 1.0)
    assert abs(eig.values.sum() - np.trace(m)) <= 1e-8 * max(abs(np.trace(m)), scale)
    np.testing.assert_allclose(m @ eig.vectors, eig.vectors * eig.values, atol=1e-8 * scale)
    np.testing.assert_allclose(eig.vectors.T @ eig.vectors, np.eye(4), atol=1e-8)


def test_solve_identity(rng):
    b = rng.normal(size=(4, 3))
    np.testing.assert_allclose(solve_linear(np.eye(4), b), b)


def test_solve_scalar():
    np.testing.assert_allclose(solve_linear(2 * np.eye(3), np.ones(3)), 0.5 * np.ones(3))


def test_solve_residual(rng):
    a = rng.normal(size=(10, 10)) + 10 * np.eye(10)
    b = rng.normal(size=(10, 2))
    x = solve_linear(a, b)
    assert np.linalg.norm(a @ x - b) < 1e-8 * np.linalg.norm(b)


def test_solve_singular():
    with pytest.raises(SingularSystem):
        solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))
    with pytest.raises(SingularSystem):
        solve_linear(np.diag([1.0, 1e-14]), np.ones(2))


def test_solve_shape_errors():
    with pytest.raises(InvalidInput):
        solve_linear(np.ones((2, 3)), np.ones(2))
    with pytest.raises(InvalidInput):
        solve_linear(np.eye(2), np.ones(3))
