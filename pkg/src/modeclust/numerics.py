"""Dense symmetric eigendecomposition and guarded linear solves.

Both routines are thin contracts over LAPACK (via numpy/scipy); what they add
is input validation, a deterministic eigenvector sign and a condition-number
guard on solves.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidInput, SingularSystem

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class EigenPairs:
    values: np.ndarray  # descending
    vectors: np.ndarray  # column i pairs with values[i]


def _check_finite_square(m, name):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInput(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput(f"{name} has non-finite entries")
    return m


def sym_eigen(m):
    """Full eigendecomposition of a real symmetric matrix.

    Eigenvalues are returned in descending order. Each eigenvector is flipped
    so that its largest-magnitude entry is nonnegative, which pins down the
    reflection ambiguity and makes downstream layouts reproducible.
    """
    m = _check_finite_square(m, "matrix")
    scale = max(np.abs(m).max(), 1.0)
    if np.abs(m - m.T).max() > 1e-12 * scale:
        raise InvalidInput("matrix is not symmetric")
    # eigh only reads one triangle; symmetrize so both agree exactly
    values, vectors = np.linalg.eigh(0.5 * (m + m.T))
    order = np.argsort(values, kind="stable")[::-1]
    values = values[order]
    vectors = vectors[:, order]
    if vectors.size:
        pivot = np.argmax(np.abs(vectors), axis=0)
        signs = np.sign(vectors[pivot, np.arange(vectors.shape[1])])
        signs[signs == 0] = 1.0
        vectors = vectors * signs
    return EigenPairs(values=values, vectors=vectors)


def solve_linear(a, b):
    """Solve ``a @ x = b`` by LU factorization.

    Raises
    ------
    SingularSystem
        If ``a`` is singular or its estimated 1-norm condition number
        exceeds 1e12.
    """
    a = _check_finite_square(a, "a")
    b = np.asarray(b, dtype=float)
    vector_rhs = b.ndim == 1
    if vector_rhs:
        b = b[:, None]
    if b.ndim != 2 or b.shape[0] != a.shape[0]:
        raise InvalidInput(f"b with shape {b.shape} is not conformable with a {a.shape}")
    if not np.all(np.isfinite(b)):
        raise InvalidInput("b has non-finite entries")

    anorm = np.abs(a).sum(axis=0).max()
    if anorm == 0.0:
        raise SingularSystem("matrix is zero")
    with np.errstate(all="ignore"):
        lu, piv, info = scipy.linalg.lapack.dgetrf(a)
    if info > 0:
        raise SingularSystem("matrix is exactly singular")
    rcond, _ = scipy.linalg.lapack.dgecon(lu, anorm, norm="1")
    if rcond == 0.0 or 1.0 / rcond > MAX_CONDITION:
        raise SingularSystem(f"condition number {1.0 / max(rcond, 1e-300):.3g} exceeds {MAX_CONDITION:g}")
    x, info = scipy.linalg.lapack.dgetrs(lu, piv, b)
    return x[:, 0] if vector_rhs else x
