"""Canonical fixture suite: closed-form cases every build must reproduce.

Each fixture returns quietly or raises AssertionError/ MaslovError; the
CLI renders the table.  The values are hand-derived (model paths, polar
identities, Chebyshev spot values) and double as the convention ledger:
if any of these move, the calibration changed.
"""
from __future__ import annotations

import numpy as np

from . import linalg as la
from .brake import BrakeSymmetry, cheb_power, split_nullity_brake, split_nullity_power
from .chebyshev import brake_return_poly, cheb_t
from .crossings import crossing_form
from .decompositions import polar_decompose, random_symplectic
from .errors import RankAmbiguous
from .frames import (
    LagrangianFrame,
    graph_frame,
    is_lagrangian,
    pair_index,
    product_space,
    random_lagrangian,
    reference_lagrangian,
    subspace_annihilator,
)
from .iterate import a_iterate, brake_iterate, delta_k
from .maslov import (
    ConstantLagrangianPath,
    PushedLagrangianPath,
    graph_index,
    index_vs_N,
    is_positive_path,
    iz,
    maslov_pairs,
    maslov_pairs_crossingform,
    nullities,
    winding_pair,
)
from .paths import ConstantPath, ExpPath, ProductPath, ReversePath
from .spaces import Tolerances, canonical_space, make_space, normalize_space
from .verify import (
    random_p_tau,
    verify_bott_iteration,
    verify_bott_path,
    verify_brake2,
    verify_brake_k,
)


def _model_objects(n: int = 1, upto: float = np.pi):
    space = canonical_space(n)
    lam0 = reference_lagrangian(space)
    path = ExpPath(space, space.J, domain=(0.0, upto))
    return space, lam0, path


def fx_space_canonical():
    space = make_space(np.diag([1j, -1j]))
    assert space.n == 1


def fx_space_same_sign_diag():
    # diag(i, i) is a valid skew-adjoint structure map; it just has no
    # Lagrangian subspaces (H+ is everything).
    space = make_space(np.diag([1j, 1j]))
    nspace, _ = normalize_space(space)
    assert (nspace.n_plus, nspace.n_minus) == (2, 0)
    try:
        reference_lagrangian(nspace)
    except Exception as exc:
        assert type(exc).__name__ == "NoLagrangians"
    else:
        raise AssertionError("expected NoLagrangians")


def fx_space_real_rotation():
    space = make_space(np.array([[0.0, -1.0], [1.0, 0.0]]))
    nspace, T = normalize_space(space)
    assert la.opnorm(nspace.J - space.J) < 1e-12
    assert la.opnorm(T - np.eye(2)) < 1e-12


def fx_normalize_scaled():
    space = make_space(np.diag([2j, -2j]))
    nspace, T = normalize_space(space)
    assert la.opnorm(nspace.J - np.diag([1j, -1j])) < 1e-12
    assert la.opnorm(T - np.sqrt(2.0) * np.eye(2)) < 1e-12


def fx_normalize_random_postconditions():
    rng = np.random.default_rng(7)
    n = 2
    g = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
    J = (g - la.herm(g)) / 2
    J = J + 1j * 0.5 * np.eye(2 * n)  # keep it invertible
    J = (J - la.herm(J)) / 2
    space = make_space(J)
    nspace, T = normalize_space(space)
    assert la.opnorm(nspace.J @ nspace.J + np.eye(2 * n)) < 1e-10
    assert la.opnorm(nspace.J + la.herm(nspace.J)) < 1e-10
    for _ in range(4):
        x = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
        y = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
        lhs = np.vdot(nspace.J @ (T @ x), T @ y)
        rhs = np.vdot(space.J @ x, y)
        assert abs(lhs - rhs) < 1e-10 * (1 + abs(rhs))


def fx_polar_identity():
    space = canonical_space(2)
    f = polar_decompose(space, np.eye(4))
    assert la.opnorm(f.A - np.eye(4)) < 1e-12 and la.opnorm(f.U - np.eye(4)) < 1e-12
    assert la.opnorm(f.S) < 1e-12


def fx_polar_unitary_input():
    space = canonical_space(2)
    M = random_symplectic(space, 5, scale=0.0)
    f = polar_decompose(space, M)
    assert la.opnorm(f.A - np.eye(4)) < 1e-9
    assert la.opnorm(f.U - M) < 1e-9


def fx_polar_cosh_sinh():
    space = canonical_space(1)
    S = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    assert space.sp_residual(S) < 1e-12
    M = np.array([[np.cosh(1.0), np.sinh(1.0)], [np.sinh(1.0), np.cosh(1.0)]],
                 dtype=complex)
    f = polar_decompose(space, M)
    assert la.opnorm(f.A - M) < 1e-9
    assert la.opnorm(f.U - np.eye(2)) < 1e-9
    assert la.opnorm(f.S - S) < 1e-9


def fx_polar_roundtrip_random():
    space = canonical_space(3)
    M = random_symplectic(space, 23)
    f = polar_decompose(space, M)
    assert f.residual < 1e-9
    again = polar_decompose(space, f.A @ f.U)
    assert la.opnorm(again.A - f.A) < 1e-9 * max(1.0, la.opnorm(f.A))
    assert la.opnorm(again.U - f.U) < 1e-9


def fx_random_symplectic_contract():
    space = canonical_space(2)
    M1 = random_symplectic(space, 42)
    M2 = random_symplectic(space, 42)
    assert np.array_equal(M1, M2)
    assert space.symplectic_residual(M1) < 1e-10
    U = random_symplectic(space, 43, scale=0.0)
    assert la.opnorm(la.herm(U) @ U - np.eye(4)) < 1e-10


def fx_annihilator_examples():
    space = canonical_space(1)
    e1 = np.array([[1.0], [0.0]], dtype=complex)
    ann = subspace_annihilator(space, e1)
    assert la.spans_equal(ann, np.array([[0.0], [1.0]], dtype=complex))
    lam0 = np.array([[1.0], [1.0]], dtype=complex) / np.sqrt(2)
    assert is_lagrangian(space, lam0)
    full = np.eye(2, dtype=complex)
    assert subspace_annihilator(space, full).shape[1] == 0


def fx_pair_index_examples():
    space = canonical_space(1)
    lam0 = LagrangianFrame(space, np.array([[1.0], [1.0]]) / np.sqrt(2))
    assert pair_index(lam0, lam0) == type(pair_index(lam0, lam0))(1, 1, 0)
    mu = LagrangianFrame(space, np.array([[1.0], [-1.0]]) / np.sqrt(2))
    assert pair_index(lam0, mu).dim_cap == 0
    big = canonical_space(4)
    p = pair_index(random_lagrangian(big, 11), random_lagrangian(big, 12))
    assert p.index == 0


def fx_crossing_form_model():
    space, lam0, path = _model_objects()
    lam = PushedLagrangianPath(path, lam0)
    mu_prime = LagrangianFrame(space, np.array([[1.0], [-1.0]]) / np.sqrt(2))
    q, basis = crossing_form(lam, 0.0, mu_prime)
    x = np.array([1.0, 1.0]) / np.sqrt(2)
    coeff = np.linalg.lstsq(basis, x.reshape(-1, 1), rcond=None)[0]
    val = float((la.herm(coeff) @ q @ coeff).real[0, 0])
    # q(x, x) = |J x|^2 = 2 on the unnormalised model vector e1 + e2
    assert abs(val * 2.0 - 2.0) < 1e-8, val
    q0, _ = crossing_form(ConstantLagrangianPath(lam0, (0.0, 1.0)), 0.5, mu_prime)
    assert la.opnorm(q0) < 1e-12
    rev = PushedLagrangianPath(ExpPath(space, space.J, domain=(0.0, 1.0), rate=-1.0), lam0)
    qr, _ = crossing_form(rev, 0.0, mu_prime)
    assert np.linalg.eigvalsh(qr)[0] < 0


def fx_maslov_model_values():
    space, lam0, path = _model_objects()
    mu = ConstantLagrangianPath(lam0, path.domain)
    assert maslov_pairs(PushedLagrangianPath(path, lam0), mu).index == 1
    path2 = ExpPath(space, space.J, domain=(0.0, 2 * np.pi))
    mu2 = ConstantLagrangianPath(lam0, path2.domain)
    assert maslov_pairs(PushedLagrangianPath(path2, lam0), mu2).index == 2
    assert maslov_pairs(mu, mu).index == 0


def fx_oracle_model_values():
    space, lam0, path = _model_objects()
    mu = ConstantLagrangianPath(lam0, path.domain)
    lam = PushedLagrangianPath(path, lam0)
    assert maslov_pairs_crossingform(lam, mu).index == 1
    rev = PushedLagrangianPath(ReversePath(path), lam0)
    assert maslov_pairs_crossingform(rev, mu).index == -1
    assert maslov_pairs(rev, mu).index == -1
    quiet_path = ExpPath(space, space.J, domain=(0.0, 1.0), rate=0.3, offset=0.7)
    quiet = PushedLagrangianPath(quiet_path, lam0)
    quiet_mu = ConstantLagrangianPath(lam0, quiet_path.domain)
    assert maslov_pairs_crossingform(quiet, quiet_mu).index == 0


def fx_graph_index_values():
    space = canonical_space(1)
    pspace = product_space(space)
    path2 = ExpPath(space, space.J, domain=(0.0, 2 * np.pi))
    assert graph_index(path2, graph_frame(pspace, np.eye(2))).index == 2
    const = ConstantPath(space, random_symplectic(space, 3), (0.0, 1.0))
    assert graph_index(const, graph_frame(pspace, np.eye(2))).index == 0
    path1 = ExpPath(space, space.J, domain=(0.0, np.pi))
    assert iz(path1, -1.0) == 2
    assert iz(path1, 1.0) == 0


def fx_nullities_values():
    space = canonical_space(1)
    pspace = product_space(space)
    assert nullities(space, np.eye(2), graph_frame(pspace, np.eye(2))) == (2, 2)
    m = np.diag([np.exp(1j), np.exp(-1j)])
    assert nullities(space, m, graph_frame(pspace, np.eye(2))) == (0, 0)
    assert nullities(space, -np.eye(2), graph_frame(pspace, -np.eye(2))) == (2, 2)


def fx_index_vs_N_three_way():
    space = canonical_space(2)
    rng = np.random.default_rng(31)
    path = random_p_tau(space, rng)
    N = random_symplectic(space, 77)
    index_vs_N(path, N)  # raises on mismatch
    one = canonical_space(1)
    path1 = ExpPath(one, one.J, domain=(0.0, 2 * np.pi))
    assert index_vs_N(path1, -np.eye(2)) == 2


def fx_positive_paths():
    space, _, path = _model_objects()
    rep = is_positive_path(path)
    assert rep.positive and abs(rep.margin - 1.0) < 1e-9
    const = ConstantPath(space, np.eye(2), (0.0, 1.0))
    assert not is_positive_path(const).positive


def fx_winding_pair_values():
    space = canonical_space(1)
    const = ConstantPath(space, random_symplectic(space, 2, scale=0.0), (0.0, 1.0))
    assert winding_pair(const) == (0, 0)
    gen = np.diag([2j * np.pi, 0.0])
    assert space.sp_residual(gen) < 1e-12
    loop = ExpPath(space, gen, domain=(0.0, 1.0))
    assert winding_pair(loop) == (1, 0)


def fx_winding_pair_additivity():
    space = canonical_space(1)
    l1 = ExpPath(space, np.diag([2j * np.pi, 0.0]), domain=(0.0, 1.0))
    l2 = ExpPath(space, np.diag([-4j * np.pi, 0.0]), domain=(0.0, 1.0))
    prod = ProductPath(l1, l2)
    w1, w2 = winding_pair(l1), winding_pair(l2)
    assert winding_pair(prod) == (w1[0] + w2[0], w1[1] + w2[1])


def fx_a_iterate_trivial():
    space, _, _ = _model_objects()
    gamma = ExpPath(space, space.J, domain=(0.0, 0.7))
    tilde = a_iterate(gamma, 2)
    for t in np.linspace(0.0, 1.4, 9):
        assert la.opnorm(tilde.value(t) - la.matrix_exp(t * space.J)) < 1e-9
    one = a_iterate(gamma, 1, random_symplectic(space, 9))
    assert la.opnorm(one.value(0.5) - gamma.value(0.5)) < 1e-12


def fx_brake_iterate_poincare():
    brake = BrakeSymmetry.random(2, 15)
    rng = np.random.default_rng(16)
    gamma = random_p_tau(brake.space, rng)
    it2 = brake_iterate(gamma, 2, brake.N)
    g1 = gamma.value(1.0)
    expected = brake.N @ np.linalg.inv(g1) @ brake.N @ g1
    assert la.opnorm(it2.value(2.0) - expected) < 1e-9 * max(1.0, la.opnorm(expected))
    const = ConstantPath(brake.space, np.eye(brake.space.dim), (0.0, 1.0))
    it3 = brake_iterate(const, 3, brake.N)
    assert la.opnorm(it3.value(2.4) - np.eye(brake.space.dim)) < 1e-12


def fx_chebyshev_spot_values():
    assert abs(cheb_t(2, np.cos(np.pi / 3)) + 0.5) < 1e-12
    assert abs(brake_return_poly(1, np.cos(2 * np.pi / 3))) < 1e-12


def fx_cheb_power_identity():
    brake = BrakeSymmetry.random(2, 21)
    rep = cheb_power(brake, np.eye(4), 5)
    assert la.opnorm(rep.power - np.eye(4)) < 1e-12
    from .verify import brake_involutive_matrix

    M = brake_involutive_matrix(brake, np.random.default_rng(22))
    assert cheb_power(brake, M, 8).relative_error <= 1e-8


def fx_split_nullity_trivial():
    space = canonical_space(2)
    rep = split_nullity_power(space, np.eye(4), 2)
    assert rep["per_root"] == {0: 4, 1: 0} and rep["total"] == 4
    small = canonical_space(1)
    rep2 = split_nullity_power(small, -np.eye(2), 2)
    assert rep2["per_root"] == {0: 0, 1: 2} and rep2["total"] == 2
    M = random_symplectic(space, 19)
    split_nullity_power(space, M, 5)


def fx_split_nullity_brake_identity_map():
    brake = BrakeSymmetry.random(2, 33)
    rep = split_nullity_brake(brake, P=np.eye(4), k=3)
    assert rep["two_times"]["lhs"] == 2  # dim U+ = n
    assert rep["power"]["lhs"] == rep["power"]["terms"][0]


def fx_bott_model_instance():
    space, _, _ = _model_objects()
    gamma = ExpPath(space, space.J, domain=(0.0, np.pi))
    v = verify_bott_path(gamma, 2)
    assert v.match and v.lhs == 2 and v.rhs_terms == [0, 2]
    loop = ExpPath(space, space.J, domain=(0.0, 1.0), rate=2 * np.pi)
    v2 = verify_bott_path(loop, 2)
    assert v2.match and v2.lhs == 4 and v2.rhs_terms == [2, 2]


def fx_delta_trivial():
    space = canonical_space(1)
    assert delta_k(space, np.eye(2), 2) == 0
    loop = ExpPath(space, space.J, domain=(0.0, 1.0), rate=2 * np.pi)
    assert iz(a_iterate(loop, 2), 1.0) - 2 * iz(loop, 1.0) == 0


def fx_brake2_trivial():
    brake = BrakeSymmetry.random(1, 3)
    const = ConstantPath(brake.space, np.eye(2), (0.0, 1.0))
    v = verify_brake2(brake, const, np.eye(2))
    assert v.match and v.lhs == 0


def fx_brake_k_model():
    brake = BrakeSymmetry(np.eye(1))
    assert la.opnorm(brake.space.J - np.array([[0, -1], [1, 0]])) < 1e-12
    rng = np.random.default_rng(44)
    gamma1 = random_p_tau(brake.space, rng)
    v = verify_brake_k(brake, gamma1, 2, "power-split")
    assert v.match


def fx_rank_ambiguity_guard():
    space = canonical_space(1, Tolerances(rank_rel=1e-1))
    f = LagrangianFrame(space, np.array([[1.0], [1.0]]) / np.sqrt(2))
    g = LagrangianFrame(space, np.array([[1.0 + 0.03], [1.0 - 0.03]]) / np.sqrt(2),
                        validate=False)
    try:
        pair_index(f, g)
    except RankAmbiguous:
        return
    raise AssertionError("expected RankAmbiguous at tol 1e-1")


def fx_sign_flip_under_J_negation():
    plus = make_space(np.diag([1j, -1j]))
    minus = make_space(np.diag([-1j, 1j]))
    values = []
    for sp in (plus, minus):
        nspace, _ = normalize_space(sp)
        path = ExpPath(nspace, plus.J, domain=(0.0, 2 * np.pi))
        values.append(graph_index(path, graph_frame(product_space(nspace),
                                                    np.eye(2))).index)
    assert values[0] == 2 and values[1] == -2, values


FIXTURES = [
    ("space: canonical structure map", fx_space_canonical),
    ("space: same-sign diagonal has no Lagrangians", fx_space_same_sign_diag),
    ("space: real rotation matrix", fx_space_real_rotation),
    ("normalize: scaled diagonal", fx_normalize_scaled),
    ("normalize: random postconditions (seed 7)", fx_normalize_random_postconditions),
    ("polar: identity", fx_polar_identity),
    ("polar: unitary input", fx_polar_unitary_input),
    ("polar: cosh/sinh block", fx_polar_cosh_sinh),
    ("polar: round trip + uniqueness", fx_polar_roundtrip_random),
    ("random symplectic: determinism & residual", fx_random_symplectic_contract),
    ("annihilator: canonical examples", fx_annihilator_examples),
    ("pair index: canonical + random", fx_pair_index_examples),
    ("crossing form: model values", fx_crossing_form_model),
    ("maslov pairs: model values", fx_maslov_model_values),
    ("oracle: model values and reversal", fx_oracle_model_values),
    ("graph index: canonical values", fx_graph_index_values),
    ("nullities: canonical values", fx_nullities_values),
    ("i_N: three-way agreement", fx_index_vs_N_three_way),
    ("positive paths: margins", fx_positive_paths),
    ("winding pair: canonical loop", fx_winding_pair_values),
    ("winding pair: product additivity", fx_winding_pair_additivity),
    ("A-iteration: trivial cases", fx_a_iterate_trivial),
    ("brake iteration: Poincare map", fx_brake_iterate_poincare),
    ("Chebyshev: scalar spot values", fx_chebyshev_spot_values),
    ("Chebyshev: block power identity", fx_cheb_power_identity),
    ("nullity splitting: powers", fx_split_nullity_trivial),
    ("nullity splitting: brake identity map", fx_split_nullity_brake_identity_map),
    ("Bott: model instances", fx_bott_model_instance),
    ("delta_k: trivial values", fx_delta_trivial),
    ("brake two-times: trivial", fx_brake2_trivial),
    ("brake k-iteration: n=1 model", fx_brake_k_model),
    ("rank guard: absurd tolerance raises", fx_rank_ambiguity_guard),
    ("convention: J -> -J flips signs", fx_sign_flip_under_J_negation),
]


def run_selftest(verbose: bool = True) -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in FIXTURES:
        try:
            fn()
            results.append((name, True, ""))
        except Exception as exc:  # report, do not abort the table
            results.append((name, False, f"{type(exc).__name__}: {exc}"))
    if verbose:
        width = max(len(n) for n, _, _ in results) + 2
        for name, ok, msg in results:
            print(f"{name:<{width}} {'PASS' if ok else 'FAIL  ' + msg}")
        n_ok = sum(1 for _, ok, _ in results if ok)
        print(f"-- {n_ok}/{len(results)} fixtures pass")
    return results
