import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gauss_jordan_inverse, inf_norm, loop_matvec
from stackcp.errors import DimensionMismatch, SingularGram
from stackcp.linalg import gram_inverse, matmul, matvec, rank_one_inverse_update


def test_gram_inverse_identity():
    np.testing.assert_array_equal(gram_inverse(np.eye(2)), np.eye(2))


def test_gram_inverse_diagonal():
    A = gram_inverse(np.array([[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    np.testing.assert_allclose(A, np.diag([0.25, 1.0]), atol=1e-15)


def test_gram_inverse_matches_gauss_jordan():
    Z = np.random.default_rng(50).normal(size=(50, 3))
    expected = np.array(gauss_jordan_inverse((Z.T @ Z).tolist()))
    np.testing.assert_allclose(gram_inverse(Z), expected, rtol=0, atol=1e-10)


def test_gram_inverse_rejects_collinear_columns():
    z = np.arange(1.0, 11.0)
    with pytest.raises(SingularGram):
        gram_inverse(np.column_stack([z, 2 * z]))


def test_gram_inverse_rejects_ill_conditioned():
    rng = np.random.default_rng(0)
    z = rng.normal(size=30)
    with pytest.raises(SingularGram):
        gram_inverse(np.column_stack([z, z + 1e-9 * rng.normal(size=30)]))


def test_gram_inverse_needs_enough_rows():
    with pytest.raises(SingularGram):
        gram_inverse(np.ones((1, 2)))


def test_rank_one_update_closed_form():
    B = rank_one_inverse_update(np.eye(2), np.array([1.0, 0.0]))
    np.testing.assert_allclose(B, [[0.5, 0.0], [0.0, 1.0]], atol=1e-15)


def test_rank_one_update_zero_vector():
    A = np.array([[2.0, 0.5], [0.5, 1.0]])
    np.testing.assert_array_equal(rank_one_inverse_update(A, np.zeros(2)), A)


def test_rank_one_update_matches_direct_inverse():
    rng = np.random.default_rng(3)
    R = rng.normal(size=(3, 3))
    A = R @ R.T + 3 * np.eye(3)
    z0 = rng.normal(size=3)
    direct = np.array(gauss_jordan_inverse((np.linalg.inv(A) + np.outer(z0, z0)).tolist()))
    np.testing.assert_allclose(rank_one_inverse_update(A, z0), direct, rtol=0, atol=1e-10)


def test_rank_one_update_dimension_check():
    with pytest.raises(DimensionMismatch):
        rank_one_inverse_update(np.eye(3), np.ones(2))


def _spd(rng, M):
    R = rng.normal(size=(M + 2, M))
    return R.T @ R + 0.1 * np.eye(M)


def test_sherman_morrison_consistency_1000_instances():
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        M = int(rng.integers(1, 7))
        G = _spd(rng, M)
        z0 = rng.normal(size=M)
        B = rank_one_inverse_update(np.linalg.inv(G), z0)
        direct = np.linalg.inv(G + np.outer(z0, z0))
        assert inf_norm(B - direct) <= 1e-8
        assert inf_norm(B @ (G + np.outer(z0, z0)) - np.eye(M)) <= 1e-8


@settings(max_examples=200, deadline=None)
@given(
    M=st.integers(1, 6),
    seed=st.integers(0, 2**32 - 1),
    scale=st.floats(0.01, 100.0),
)
def test_update_stays_symmetric_positive_definite(M, seed, scale):
    rng = np.random.default_rng(seed)
    A = np.linalg.inv(_spd(rng, M))
    B = rank_one_inverse_update(A, scale * rng.normal(size=M))
    np.testing.assert_array_equal(B, B.T)
    np.linalg.cholesky(B)


@settings(max_examples=100, deadline=None)
@given(n=st.integers(5, 40), M=st.integers(1, 5), seed=st.integers(0, 2**32 - 1))
def test_gram_inverse_is_inverse(n, M, seed):
    Z = np.random.default_rng(seed).normal(size=(n, M))
    try:
        A = gram_inverse(Z)
    except SingularGram:
        return
    assert inf_norm(A @ (Z.T @ Z) - np.eye(M)) <= 1e-8


def test_matvec_identity_and_zero():
    x = np.array([1.0, -2.0, 3.5])
    np.testing.assert_array_equal(matvec(np.eye(3), x), x)
    np.testing.assert_array_equal(matvec(np.zeros((2, 3)), x), np.zeros(2))


def test_matvec_matches_loop():
    rng = np.random.default_rng(4)
    A, x = rng.normal(size=(4, 3)), rng.normal(size=3)
    np.testing.assert_allclose(matvec(A, x), loop_matvec(A.tolist(), x.tolist()), rtol=0, atol=1e-12)


def test_matmul_matches_numpy_and_checks_shapes():
    rng = np.random.default_rng(5)
    A, B = rng.normal(size=(4, 3)), rng.normal(size=(3, 2))
    np.testing.assert_allclose(matmul(A, B), A @ B, atol=1e-12)
    with pytest.raises(DimensionMismatch):
        matmul(A, A)
    with pytest.raises(DimensionMismatch):
        matvec(A, np.ones(4))
