"""Acceptance gate: every criterion at its stated size and tolerance.

Each test prints one summary line (visible with `pytest -s` or in the
captured output) and fails loudly if any instance misses.  All identity
comparisons are exact integers; the only tolerances are the stated
numerical residual bounds.
"""
import time

import numpy as np
import pytest

from maslov_iter import linalg as la
from maslov_iter.brake import BrakeSymmetry, cheb_power, split_nullity_brake, \
    split_nullity_power
from maslov_iter.chebyshev import brake_return_poly, cheb_t
from maslov_iter.decompositions import polar_decompose, random_symplectic
from maslov_iter.errors import DegenerateCrossing, NonIsolatedCrossing
from maslov_iter.frames import graph_frame, product_space, random_lagrangian, \
    reference_lagrangian
from maslov_iter.maslov import (
    ConstantLagrangianPath,
    GraphLagrangianPath,
    PushedLagrangianPath,
    graph_index,
    is_positive_path,
    maslov_pairs,
    maslov_pairs_crossingform,
    winding_pair,
)
from maslov_iter.paths import ConjugationPath, ExpPath, ProductPath
from maslov_iter.spaces import canonical_space
from maslov_iter.verify import (
    BRAKE_K_IDENTITIES,
    brake_involutive_matrix,
    random_free_path,
    random_p_tau,
    random_positive_path,
    trial_seed,
    verify_bott_iteration,
    verify_bott_path,
    verify_brake2,
    verify_brake_k,
    verify_delta_pathindependence,
    verify_homotopy_shift,
)

MASTER = 20240811


def _report(criterion: str, passed: int, total: int, extra: str = "") -> None:
    status = "PASS" if passed == total else "FAIL"
    print(f"[acceptance] {criterion}: {passed}/{total} {status} {extra}".rstrip())
    assert passed == total, f"{criterion}: {passed}/{total}"


def test_criterion_1_bott_identity():
    """Thm 4.1 power splitting on 200 random paths, n <= 3, k <= 6, < 60 s."""
    t0 = time.time()
    passed = total = 0
    for trial in range(200):
        seed = trial_seed(MASTER, trial)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        k = int(rng.integers(2, 7))
        space = canonical_space(n)
        v = verify_bott_path(random_free_path(space, rng), k, seed=seed)
        total += 1
        passed += v.match
    elapsed = time.time() - t0
    _report("1 Bott identity", passed, total, f"({elapsed:.1f}s)")
    assert elapsed < 60.0, f"Bott campaign took {elapsed:.1f}s"


def test_criterion_2_a_iteration_and_delta():
    """Cor 4.1 index+nullity identities (100 random A) and delta_k (50 pairs)."""
    passed = total = 0
    for trial in range(100):
        seed = trial_seed(MASTER + 1, trial)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        k = int(rng.integers(2, 7))
        space = canonical_space(n)
        A = random_symplectic(space, seed + 1)
        v = verify_bott_iteration(random_p_tau(space, rng), k, A, seed=seed)
        total += 1
        passed += v.match
    _report("2a A-iteration identities", passed, total)

    passed = total = 0
    for trial in range(50):
        seed = trial_seed(MASTER + 2, trial)
        rng = np.random.default_rng(seed)
        space = canonical_space(int(rng.integers(1, 3)))
        v = verify_delta_pathindependence(space, seed, k=int(rng.integers(2, 5)))
        total += 1
        passed += v.match
    _report("2b delta_k well-definedness", passed, total)


def test_criterion_3_brake_two_times():
    """Thm 4.2 / Cor 4.2 on 100 instances with S = NQNQ^-1, S = I included."""
    passed = total = 0
    for trial in range(100):
        seed = trial_seed(MASTER + 3, trial)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        brake = BrakeSymmetry.random(n, seed)
        gamma1 = random_p_tau(brake.space, rng, scale=0.8)
        if trial % 4 == 0:
            S = np.eye(2 * n)           # classical brake formula
        else:
            S = brake.random_reflection(seed + 3)
        v = verify_brake2(brake, gamma1, S, seed=seed,
                          use_iterate=(trial % 5 == 0))
        total += 1
        passed += v.match
    _report("3 brake two-times formula", passed, total)


@pytest.mark.parametrize("identity", BRAKE_K_IDENTITIES)
def test_criterion_4_brake_k(identity):
    """Thm 4.3 / Cor 4.3 identity, 100 instances, n <= 2, k <= 5."""
    passed = total = 0
    for trial in range(100):
        seed = trial_seed(MASTER + 4, 1000 * BRAKE_K_IDENTITIES.index(identity) + trial)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 3))
        k = int(rng.integers(2, 6))
        brake = BrakeSymmetry.random(n, seed)
        gamma1 = random_p_tau(brake.space, rng, scale=0.75)
        v = verify_brake_k(brake, gamma1, k, identity, seed=seed)
        total += 1
        passed += v.match
    _report(f"4 brake k-iteration [{identity}]", passed, total)


def test_criterion_5_nullity_splittings():
    """Eq 4.9 and the brake splittings, 200 instances of rank computations."""
    passed = total = 0
    for trial in range(200):
        seed = trial_seed(MASTER + 5, trial)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        k = int(rng.integers(2, 7))
        total += 1
        if trial % 2 == 0:
            space = canonical_space(n)
            phases = np.exp(2j * np.pi * rng.integers(0, k, size=2 * n) / k)
            p, m = space.plus_basis, space.minus_basis
            U = p @ np.diag(phases[:n]) @ la.herm(p) \
                + m @ np.diag(phases[n:]) @ la.herm(m)
            G = random_symplectic(space, seed + 70)
            split_nullity_power(space, G @ U @ np.linalg.inv(G), k)
        else:
            brake = BrakeSymmetry.random(n, seed)
            if trial % 4 == 1:
                angle = np.pi * int(rng.integers(1, k)) / k
                M = brake_involutive_matrix(brake, rng, planted_angles=[angle],
                                            fixed_modes=int(rng.random() < 0.5))
                split_nullity_brake(brake, M=M, k=k, alpha=angle)
            else:
                P = brake.random_symplectic(seed + 5)
                split_nullity_brake(brake, P=P, k=k)
        passed += 1  # helpers raise on any violated identity
    _report("5 nullity splittings", passed, total)


def test_criterion_6_chebyshev_block_power():
    """Block power within 1e-8 relative for k <= 12; scalar spot checks 1e-12."""
    assert abs(cheb_t(2, np.cos(np.pi / 3)) - (-0.5)) < 1e-12
    assert abs(brake_return_poly(1, np.cos(2 * np.pi / 3))) < 1e-12
    passed = total = 0
    worst = 0.0
    for trial in range(100):
        seed = trial_seed(MASTER + 6, trial)
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        k = int(rng.integers(2, 13))
        brake = BrakeSymmetry.random(n, seed)
        M = brake_involutive_matrix(brake, rng)
        rep = cheb_power(brake, M, k)
        worst = max(worst, rep.relative_error)
        total += 1
        passed += rep.relative_error <= 1e-8
    _report("6 Chebyshev block power", passed, total, f"(worst rel err {worst:.2e})")


def test_criterion_7_oracle_equivalence():
    """Winding index == crossing-form index on 100 nondegenerate paths."""
    passed = total = 0
    trial = 0
    attempts = 0
    while total < 100 and attempts < 300:
        attempts += 1
        seed = trial_seed(MASTER + 7, trial)
        trial += 1
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        space = canonical_space(n)
        if attempts % 2 == 0:
            lam = PushedLagrangianPath(random_p_tau(space, rng, scale=1.3),
                                       random_lagrangian(space, seed + 1))
            mu = ConstantLagrangianPath(random_lagrangian(space, seed + 2),
                                        lam.path.domain)
        else:
            pspace = product_space(space)
            path = random_p_tau(space, rng, scale=1.2)
            lam = GraphLagrangianPath(pspace, path)
            mu = ConstantLagrangianPath(
                graph_frame(pspace, random_symplectic(space, seed + 3)), path.domain)
        try:
            oracle = maslov_pairs_crossingform(lam, mu).index
        except (DegenerateCrossing, NonIsolatedCrossing):
            continue
        total += 1
        passed += (maslov_pairs(lam, mu).index == oracle)
    _report("7 oracle equivalence", passed, total, f"({attempts} sampled)")
    assert total == 100


def test_criterion_8_canonical_fixtures():
    """Pinned values of the model paths and the polar round trip."""
    ok = 0
    space = canonical_space(1)
    full = ExpPath(space, space.J, domain=(0.0, 2 * np.pi))
    ok += graph_index(full, graph_frame(product_space(space), np.eye(2))).index == 2

    lam0 = reference_lagrangian(space)
    half = ExpPath(space, space.J, domain=(0.0, np.pi))
    ok += maslov_pairs(PushedLagrangianPath(half, lam0),
                       ConstantLagrangianPath(lam0, half.domain)).index == 1

    loop = ExpPath(space, np.diag([2j * np.pi, 0.0]), domain=(0.0, 1.0))
    ok += winding_pair(loop) == (1, 0)

    worst = 0.0
    for seed in range(10):
        big = canonical_space(3)
        M = random_symplectic(big, seed)
        f = polar_decompose(big, M)
        worst = max(worst, f.residual)
    ok += worst <= 1e-9
    _report("8 canonical fixtures", ok, 4, f"(polar residual {worst:.2e})")


def test_criterion_9_positivity_closure():
    """Products (Lemma 2.2) and brake conjugates (Lemma 4.7) stay positive."""
    passed = total = 0
    for trial in range(50):
        seed = trial_seed(MASTER + 9, trial)
        rng = np.random.default_rng(seed)
        space = canonical_space(int(rng.integers(1, 4)))
        p1 = random_positive_path(space, rng)
        p2 = random_positive_path(space, rng)
        total += 1
        passed += is_positive_path(ProductPath(p1, p2)).margin > 0
    _report("9a product positivity", passed, total)

    passed = total = 0
    for trial in range(50):
        seed = trial_seed(MASTER + 10, trial)
        rng = np.random.default_rng(seed)
        brake = BrakeSymmetry.random(int(rng.integers(1, 3)), seed)
        p = random_positive_path(brake.space, rng)
        total += 1
        passed += is_positive_path(ConjugationPath(p, brake.N)).margin > 0
    _report("9b brake-conjugate positivity", passed, total)


def test_criterion_10_homotopy_deformation():
    """e^{J s0}-pushed paths change i_V by the swept endpoint counts, 50x."""
    passed = total = 0
    for trial in range(50):
        seed = trial_seed(MASTER + 11, trial)
        rng = np.random.default_rng(seed)
        space = canonical_space(int(rng.integers(1, 4)))
        v = verify_homotopy_shift(space, seed, s0=0.15 + 0.4 * rng.random())
        total += 1
        passed += v.match
    _report("10 homotopy endpoint sweep", passed, total)
