import numpy as np
import pytest

from maslov_iter import linalg as la
from maslov_iter.errors import RankAmbiguous, RankDeficient


def test_numerical_rank_plain():
    a = np.diag([1.0, 1e-3, 0.0])
    assert la.numerical_rank(a) == 2


def test_numerical_rank_ambiguity_band():
    a = np.diag([1.0, 5e-9])  # inside (0.1, 10) * 1e-8
    with pytest.raises(RankAmbiguous):
        la.numerical_rank(a)


def test_numerical_rank_zero_matrix():
    assert la.numerical_rank(np.zeros((3, 3))) == 0


def test_null_space_orthonormal():
    a = np.array([[1.0, 2.0, 3.0]])
    ns = la.null_space(a)
    assert ns.shape == (3, 2)
    assert np.allclose(a @ ns, 0.0, atol=1e-12)
    assert np.allclose(la.herm(ns) @ ns, np.eye(2), atol=1e-12)


def test_orthonormal_columns_rejects_dependent():
    a = np.array([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(RankDeficient):
        la.orthonormal_columns(a)


def test_intersection_and_spans():
    f = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    g = np.array([[1.0], [0.0], [0.0]])
    assert la.intersection_dim(f, g) == 1
    basis = la.intersection_basis(f, g)
    assert basis.shape == (3, 1)
    assert la.spans_equal(basis, g)


def test_hermitian_function_sqrt():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = la.hermitian_part(g @ la.herm(g)) + np.eye(4)
    r = la.hermitian_function(h, np.sqrt, positive=True)
    assert np.allclose(r @ r, h, atol=1e-10)


def test_unitary_eigensystem_and_log():
    rng = np.random.default_rng(1)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    u, _ = la.project_unitary(g)
    w, z = la.unitary_eigensystem(u)
    assert np.allclose(z @ np.diag(w) @ la.herm(z), u, atol=1e-10)
    logu = la.log_unitary(u)
    assert np.allclose(la.matrix_exp(logu), u, atol=1e-10)
    assert np.allclose(logu + la.herm(logu), 0.0, atol=1e-10)


def test_log_unitary_branch_guard():
    u = np.diag([-1.0 + 0j, 1.0])
    logu = la.log_unitary(u)
    assert np.allclose(la.matrix_exp(logu), u, atol=1e-8)
