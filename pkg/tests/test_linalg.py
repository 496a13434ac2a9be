import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ptmpemba import linalg
from ptmpemba.model import IDENTITY, SIGMA_X, SIGMA_Z


def test_residual_bound_on_random_matrices(rng):
    for _ in range(1000):
        m = rng.uniform(-2, 2, (4, 4)) + 1j * rng.uniform(-2, 2, (4, 4))
        es = linalg.eigendecompose(m)
        assert es.max_residual <= linalg.RESIDUAL_RTOL
        gram = es.left.conj().T @ es.right
        assert np.allclose(gram, np.eye(4), atol=1e-9)


def test_right_vectors_unit_norm(rng):
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    es = linalg.eigendecompose(m)
    assert np.allclose(np.linalg.norm(es.right, axis=0), 1.0)


def test_jordan_block_is_flagged_not_raised():
    es = linalg.eigendecompose(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert es.near_defective


def test_non_square_rejected():
    with pytest.raises(ValueError):
        linalg.eigendecompose(np.zeros((2, 3)))


def test_hermitian_eigenvalues_sum_to_trace(rng):
    for _ in range(200):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = g + g.conj().T
        lam = linalg.hermitian_eigenvalues(h)
        assert abs(lam.sum() - np.trace(h).real) < 1e-10
        assert np.all(np.diff(lam) <= 0)


def test_hermitian_eigenvalues_examples():
    assert np.allclose(linalg.hermitian_eigenvalues(SIGMA_Z), [1, -1])
    assert np.allclose(linalg.hermitian_eigenvalues((SIGMA_Z + IDENTITY) / 2), [1, 0])
    with pytest.raises(linalg.NotHermitian):
        linalg.hermitian_eigenvalues(np.array([[0, 1], [0, 0]]))


def test_matrix_log_examples():
    assert np.allclose(linalg.matrix_log_hermitian(np.eye(3)), 0)
    assert np.allclose(linalg.matrix_log_hermitian(np.diag([np.e, 1 / np.e])), np.diag([1, -1]))
    assert np.allclose(linalg.matrix_log_hermitian(IDENTITY / 2), -np.log(2) * np.eye(2))
    # zero eigenvalue is clipped to the floor
    out = linalg.matrix_log_hermitian(np.diag([1.0, 0.0]))
    assert np.isclose(out[1, 1], np.log(linalg.LOG_FLOOR))
    with pytest.raises(linalg.NotHermitian):
        linalg.matrix_log_hermitian(np.array([[1, 2], [0, 1]]))
    with pytest.raises(ValueError):
        linalg.matrix_log_hermitian(np.eye(2), floor=0)


def test_kron_examples():
    assert np.array_equal(linalg.kron(IDENTITY, IDENTITY), np.eye(4))
    assert np.array_equal(linalg.kron(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))
    sx = linalg.kron(SIGMA_X, IDENTITY)
    assert np.array_equal(sx[:2, 2:], np.eye(2)) and np.array_equal(sx[:2, :2], np.zeros((2, 2)))


int_mats = arrays(np.int64, (2, 2), elements=st.integers(-5, 5))


@given(int_mats, int_mats, int_mats)
def test_kron_associative_exact(a, b, c):
    assert np.array_equal(linalg.kron(linalg.kron(a, b), c), linalg.kron(a, linalg.kron(b, c)))
    assert np.array_equal(linalg.kron(a, b, c), linalg.kron(a, linalg.kron(b, c)))


# millesimal grid keeps LAPACK away from subnormal entries
finite = st.integers(-3000, 3000).map(lambda k: k / 1000)


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, (2, 4, 4), elements=finite))
def test_eigendecompose_reconstructs(parts):
    m = parts[0] + 1j * parts[1]
    es = linalg.eigendecompose(m)
    if es.near_defective:
        return
    rebuilt = es.right @ np.diag(es.values) @ es.left.conj().T
    assert np.allclose(rebuilt, m, atol=1e-8 * max(1.0, np.linalg.norm(m)) * min(es.condition_estimate, 1e4))
