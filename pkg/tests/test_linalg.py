import numpy as np
from numpy.testing import assert_allclose
import pytest

from fullstep.exceptions import DimensionMismatch, NotPositiveDefinite, PreconditionFailed
from fullstep.linalg import cholesky, gram_factor, nullspace, numerical_rank, schur_complement, solve_spd


def _spd(n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    b = rng.standard_normal((n, n))
    return b @ b.T + n * np.eye(n)


def test_cholesky_matches_numpy():
    m = _spd(6)
    factor = cholesky(m)
    assert_allclose(factor.lower, np.linalg.cholesky(m), rtol=1e-12, atol=1e-12)
    assert_allclose(factor.matrix(), m, rtol=1e-12)


def test_cholesky_reports_failing_pivot():
    with pytest.raises(NotPositiveDefinite) as info:
        cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert info.value.pivot == 2


def test_cholesky_rejects_non_finite():
    with pytest.raises(NotPositiveDefinite) as info:
        cholesky(np.array([[1.0, 0.0], [0.0, np.nan]]))
    assert info.value.pivot == 2


def test_cholesky_requires_square():
    with pytest.raises(DimensionMismatch):
        cholesky(np.ones((2, 3)))


def test_solve_spd_and_triangular_solves():
    m = _spd(5, seed=1)
    factor = cholesky(m)
    rhs = np.arange(5.0)
    assert_allclose(m @ solve_spd(factor, rhs), rhs, atol=1e-10)
    v = np.linspace(-1, 1, 5)
    assert_allclose(factor.lower @ factor.solve_lower(v), v, atol=1e-12)
    assert_allclose(factor.multiply_upper(v), factor.lower.T @ v)


def test_solve_spd_dimension_mismatch():
    factor = cholesky(np.eye(3))
    with pytest.raises(DimensionMismatch):
        solve_spd(factor, np.ones(4))


def test_schur_complement():
    h = _spd(4, seed=2)
    a = np.array([[1.0, 2.0, 0.0, -1.0], [0.0, 1.0, 1.0, 1.0]])
    schur, v = schur_complement(cholesky(h), a)
    assert_allclose(schur, a @ np.linalg.solve(h, a.T), rtol=1e-10)
    assert v.shape == (4, 2)


def test_nullspace_is_orthonormal_kernel():
    b = np.array([[1.0, -1.0, 0.0]])
    basis = nullspace(b)
    assert basis.k == 2
    assert basis.ambient_dimension == 3
    assert_allclose(b @ basis.basis, 0.0, atol=1e-12)
    assert_allclose(basis.basis.T @ basis.basis, np.eye(2), atol=1e-12)


def test_nullspace_of_full_rank_matrix_is_empty():
    assert nullspace(np.eye(2)).k == 0


def test_numerical_rank():
    assert numerical_rank(np.array([[1.0, 1.0], [2.0, 2.0]])) == 1
    assert numerical_rank(np.eye(3)) == 3
    assert numerical_rank(np.zeros((2, 2))) == 0


def test_cholesky_rejects_asymmetric_matrix():
    m = _spd(3)
    m[0, 2] += 1e-6
    with pytest.raises(PreconditionFailed, match="对称"):
        cholesky(m)
    # 舍入级别的不对称仍然接受
    m = _spd(3)
    m[0, 2] += 1e-14
    cholesky(m)


def test_gram_factor_matches_cholesky_of_product():
    rng = np.random.default_rng(3)
    k = rng.standard_normal((12, 5))
    factor = gram_factor(k)
    assert np.all(np.diag(factor.lower) > 0)
    assert_allclose(factor.lower, np.linalg.cholesky(k.T @ k), rtol=1e-10, atol=1e-12)
    assert_allclose(factor.matrix(), k.T @ k, rtol=1e-12, atol=1e-12)


def test_gram_factor_rank_deficiency():
    with pytest.raises(NotPositiveDefinite):
        gram_factor(np.ones((1, 2)))
    with pytest.raises(NotPositiveDefinite) as info:
        gram_factor(np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]))
    assert info.value.pivot == 2
    assert gram_factor(np.zeros((3, 0))).dimension == 0
