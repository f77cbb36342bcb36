import numpy as np
import pytest

from maslov_iter import linalg as la
from maslov_iter.brake import (
    BrakeSymmetry,
    cheb_power,
    kernel_dim,
    reflection_kernel_split,
    restricted_conullity,
    restricted_nullity,
    rotation_factor_residual,
    rotation_kernel_match,
    split_nullity_brake,
    split_nullity_power,
)
from maslov_iter.chebyshev import chebyshev_t_coeffs, chebyshev_u_coeffs
from maslov_iter.decompositions import random_symplectic
from maslov_iter.errors import NotBrakeInvolution
from maslov_iter.frames import is_lagrangian
from maslov_iter.spaces import canonical_space
from maslov_iter.verify import brake_involutive_matrix


def test_brake_structure_invariants():
    brake = BrakeSymmetry.random(3, 0)
    N, J = brake.N, brake.space.J
    assert la.opnorm(N @ N - np.eye(6)) < 1e-12
    assert la.opnorm(la.herm(N) @ J @ N + J) < 1e-12
    assert is_lagrangian(brake.space, brake.plus_frame.columns)
    assert is_lagrangian(brake.space, brake.minus_frame.columns)
    s = np.linalg.svd(brake.K, compute_uv=False)
    assert s[-1] >= 0.1 - 1e-12


def test_from_involution_roundtrip():
    brake = BrakeSymmetry.random(2, 1)
    # scramble the basis with a unitary and re-adapt
    rng = np.random.default_rng(3)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    Q, _ = la.project_unitary(g)
    from maslov_iter.spaces import make_space

    space2 = make_space(la.herm(Q) @ brake.space.J @ Q)
    N2 = la.herm(Q) @ brake.N @ Q
    adapted, P = BrakeSymmetry.from_involution(space2, N2)
    assert la.opnorm(la.herm(P) @ space2.J @ P - adapted.space.J) < 1e-9
    M2 = la.herm(Q) @ brake.random_symplectic(9) @ Q
    M_ad = np.linalg.inv(P) @ M2 @ P
    assert adapted.space.symplectic_residual(M_ad) < 1e-7


def test_from_involution_rejects_non_involution():
    brake = BrakeSymmetry.random(1, 2)
    with pytest.raises(NotBrakeInvolution):
        BrakeSymmetry.from_involution(brake.space, 2 * brake.N)


def test_reflections_have_lagrangian_eigenframes():
    brake = BrakeSymmetry.random(2, 5)
    S = brake.random_reflection(7)
    v_plus, v_minus = brake.reflection_eigenframes(S)
    assert is_lagrangian(brake.space, v_plus.columns)
    assert is_lagrangian(brake.space, v_minus.columns)
    NS = brake.N @ S
    assert la.opnorm(NS @ NS - np.eye(4)) < 1e-9
    # S = I specialisation: V+- are U-+
    vp, vm = brake.reflection_eigenframes(np.eye(4))
    assert la.spans_equal(vp.columns, brake.plus_frame.columns)
    assert la.spans_equal(vm.columns, brake.minus_frame.columns)


@pytest.mark.parametrize("seed,k", [(0, 2), (1, 5), (2, 8), (3, 12)])
def test_cheb_power_matches_direct(seed, k):
    brake = BrakeSymmetry.random(2, seed)
    rng = np.random.default_rng(seed + 50)
    M = brake_involutive_matrix(brake, rng)
    rep = cheb_power(brake, M, k)
    assert rep.relative_error <= 1e-8
    assert max(rep.block_residuals.values()) <= 1e-9


def test_cheb_power_rejects_non_involutive():
    brake = BrakeSymmetry.random(1, 3)
    M = brake.random_symplectic(11)
    if la.opnorm((brake.N @ M) @ (brake.N @ M) - np.eye(2)) > 1e-6:
        with pytest.raises(NotBrakeInvolution):
            cheb_power(brake, M, 3)


def test_coefficients_are_integers():
    assert chebyshev_t_coeffs(6) == (-1, 0, 18, 0, -48, 0, 32)
    assert chebyshev_u_coeffs(3) == (0, -4, 0, 8)


@pytest.mark.parametrize("seed", range(4))
def test_split_nullity_power_planted(seed):
    space = canonical_space(2)
    k = 3 + seed
    rng = np.random.default_rng(seed)
    phases = np.exp(2j * np.pi * rng.integers(0, k, size=4) / k)
    p, m = space.plus_basis, space.minus_basis
    U = p @ np.diag(phases[:2]) @ la.herm(p) + m @ np.diag(phases[2:]) @ la.herm(m)
    G = random_symplectic(space, seed + 70)
    M = G @ U @ np.linalg.inv(G)
    rep = split_nullity_power(space, M, k)
    assert rep["total"] == sum(rep["per_root"].values())
    assert rep["total"] >= 1  # planted roots of unity guarantee nullity


@pytest.mark.parametrize("seed", range(5))
def test_split_nullity_brake_random(seed):
    n = 1 + seed % 3
    brake = BrakeSymmetry.random(n, seed)
    k = 2 + seed % 4
    P = brake.random_symplectic(seed + 5)
    rep = split_nullity_brake(brake, P=P, k=k)
    assert "two_times" in rep and "power" in rep and "odd" in rep


def test_split_nullity_brake_planted_alpha():
    brake = BrakeSymmetry.random(2, 9)
    rng = np.random.default_rng(9)
    k = 4
    alpha = np.pi * 2 / k
    M = brake_involutive_matrix(brake, rng, planted_angles=[alpha])
    rep = split_nullity_brake(brake, M=M, k=k, alpha=alpha)
    assert rep["rotation_kernel"] >= 1
    assert rep["power"]["lhs"] >= 1


def test_involutive_square_family():
    """P with (NP)^2 = I gives M = N P^{-1} N P = P^2."""
    brake = BrakeSymmetry.random(2, 12)
    rng = np.random.default_rng(12)
    P = brake_involutive_matrix(brake, rng, planted_angles=[0.9])
    M = brake.N @ np.linalg.inv(P) @ brake.N @ P
    assert la.opnorm(M - P @ P) < 1e-8 * max(1.0, la.opnorm(M))
    rep = split_nullity_brake(brake, P=P, k=3, alpha=1.8)
    assert rep["rotation_kernel"] >= 1  # planted 0.9 doubles to 1.8


def test_restricted_nullity_identity_map():
    brake = BrakeSymmetry.random(3, 2)
    eye = np.eye(6)
    assert restricted_nullity(brake.space, eye, brake.plus_frame, brake.plus_frame) == 3
    assert restricted_nullity(brake.space, eye, brake.plus_frame, brake.minus_frame) == 0
    assert restricted_conullity(brake.space, eye, brake.plus_frame, brake.plus_frame) == 3


def test_rotation_factorisation_and_kernels():
    brake = BrakeSymmetry.random(2, 21)
    rng = np.random.default_rng(4)
    alpha = 1.1
    M = brake_involutive_matrix(brake, rng, planted_angles=[alpha])
    assert rotation_factor_residual(brake, M, 0.7) < 1e-10
    d_ker, m_ker = rotation_kernel_match(brake, M, alpha)
    assert d_ker == m_ker == 1
    assert kernel_dim(brake.space, M, np.exp(1j * alpha)) == 1


@pytest.mark.parametrize("seed", range(4))
def test_reflection_kernel_split_random(seed):
    brake = BrakeSymmetry.random(2, seed)
    S = brake.random_reflection(seed + 30)
    M = brake.random_symplectic(seed + 60)
    rep = reflection_kernel_split(brake, M, S)
    assert rep["lhs"] == rep["ker_C"] + rep["ker_B"]
    assert rep["antidiagonal_residual"] < 1e-8
