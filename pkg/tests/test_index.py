"""Winding-method index: pinned model values and structural properties."""
import numpy as np
import pytest

from maslov_iter import linalg as la
from maslov_iter.decompositions import random_symplectic, random_sp_element
from maslov_iter.frames import (
    LagrangianFrame,
    graph_frame,
    product_space,
    random_lagrangian,
    reference_lagrangian,
)
from maslov_iter.maslov import (
    ConstantLagrangianPath,
    PushedLagrangianPath,
    graph_index,
    index_vs_N,
    is_positive_path,
    iz,
    maslov_pairs,
    nullities,
    winding_pair,
)
from maslov_iter.paths import ConstantPath, ExpPath, ProductPath, SymplecticPath
from maslov_iter.spaces import canonical_space, make_space, normalize_space
from maslov_iter.verify import random_p_tau, random_positive_path


def _model(n=1, upto=np.pi):
    space = canonical_space(n)
    lam0 = reference_lagrangian(space)
    path = ExpPath(space, space.J, domain=(0.0, upto))
    return space, lam0, path


def test_model_pair_values():
    space, lam0, path = _model()
    mu = ConstantLagrangianPath(lam0, path.domain)
    assert maslov_pairs(PushedLagrangianPath(path, lam0), mu).index == 1
    space2, lam02, path2 = _model(upto=2 * np.pi)
    mu2 = ConstantLagrangianPath(lam02, path2.domain)
    assert maslov_pairs(PushedLagrangianPath(path2, lam02), mu2).index == 2
    assert maslov_pairs(mu, mu).index == 0


def test_graph_model_values():
    space, _, path = _model(upto=2 * np.pi)
    pspace = product_space(space)
    assert graph_index(path, graph_frame(pspace, np.eye(2))).index == 2
    half = ExpPath(space, space.J, domain=(0.0, np.pi))
    assert graph_index(half, graph_frame(pspace, np.eye(2))).index == 0
    assert iz(half, -1.0) == 2
    const = ConstantPath(space, random_symplectic(space, 1), (0.0, 1.0))
    assert graph_index(const, graph_frame(pspace, np.eye(2))).index == 0


@pytest.mark.parametrize("seed", range(6))
def test_concat_additivity(seed):
    space = canonical_space(2)
    rng = np.random.default_rng(seed)
    path = random_p_tau(space, rng, scale=1.4)
    V = graph_frame(product_space(space), random_symplectic(space, seed + 50))
    whole = graph_index(path, V).index
    mid = 0.31 + 0.4 * rng.random()
    left = graph_index(path, V, (0.0, mid)).index
    right = graph_index(path, V, (mid, 1.0)).index
    assert whole == left + right


@pytest.mark.parametrize("seed", range(4))
def test_direct_sum_additivity(seed):
    n1, n2 = 1, 2
    s1, s2 = canonical_space(n1), canonical_space(n2)
    rng = np.random.default_rng(seed)
    p1 = random_p_tau(s1, rng, scale=1.2)
    p2 = random_p_tau(s2, rng, scale=1.2)
    v1 = graph_frame(product_space(s1), random_symplectic(s1, seed + 10))
    v2 = graph_frame(product_space(s2), random_symplectic(s2, seed + 20))
    i1 = graph_index(p1, v1).index
    i2 = graph_index(p2, v2).index

    big = make_space(la.blockdiag(s1.J, s2.J))
    nbig, _ = normalize_space(big)

    class SumPath(SymplecticPath):
        def __init__(self):
            super().__init__(nbig, p1.domain)
            self.exact_derivative = True

        def _value(self, t):
            return la.blockdiag(p1.value(t), p2.value(t))

        def _derivative(self, t):
            return la.blockdiag(p1.derivative(t), p2.derivative(t))

    # interleave the product-space blocks of V1 and V2 to a V in (H1+H2)^2
    d1, d2 = 2 * n1, 2 * n2
    c1, c2 = v1.columns, v2.columns
    cols = np.zeros((2 * (d1 + d2), d1 + d2), dtype=complex)
    cols[:d1, :d1] = c1[:d1]
    cols[d1:d1 + d2, d1:] = c2[:d2]
    cols[d1 + d2:2 * d1 + d2, :d1] = c1[d1:]
    cols[2 * d1 + d2:, d1:] = c2[d2:]
    V = LagrangianFrame(product_space(nbig), cols)
    assert graph_index(SumPath(), V).index == i1 + i2


@pytest.mark.parametrize("seed", range(4))
def test_v_frame_equivalence(seed):
    space = canonical_space(2)
    rng = np.random.default_rng(seed)
    path = random_p_tau(space, rng)
    V = graph_frame(product_space(space), random_symplectic(space, seed + 3))
    G = np.diag([1.0, 2.0, 0.5, 3.0]) + 0.3j * np.triu(np.ones((4, 4)), 1)
    assert graph_index(path, V).index == graph_index(path, V.transformed(G)).index


@pytest.mark.parametrize("seed", range(5))
def test_index_vs_N_three_way_random(seed):
    space = canonical_space(min(3, 1 + seed % 3))
    rng = np.random.default_rng(seed)
    path = random_p_tau(space, rng)
    N = random_symplectic(space, seed + 7)
    index_vs_N(path, N)  # IdentityMismatch on failure


def test_iz_thorough_matches_fast():
    space = canonical_space(2)
    rng = np.random.default_rng(12)
    path = random_p_tau(space, rng)
    for z in (1.0, -1.0, np.exp(0.7j)):
        assert iz(path, z) == iz(path, z, thorough=True)


@pytest.mark.parametrize("seed", range(4))
def test_positive_path_counting(seed):
    """For positive paths the index equals the nullity accrued on (a, b]."""
    from maslov_iter.errors import MaslovError
    from maslov_iter.maslov import GraphLagrangianPath, maslov_pairs_crossingform

    space = canonical_space(2)
    rng = np.random.default_rng(seed)
    path = random_positive_path(space, rng, scale=0.8)
    rep = is_positive_path(path)
    assert rep.positive and rep.margin > 0
    pspace = product_space(space)
    V = graph_frame(pspace, random_symplectic(space, seed + 31))
    idx = graph_index(path, V).index
    a, _ = path.domain
    try:
        oracle = maslov_pairs_crossingform(
            GraphLagrangianPath(pspace, path),
            ConstantLagrangianPath(V, path.domain))
    except MaslovError:
        pytest.skip("degenerate crossing in sampled instance")
    accrued = sum(c.nullity for c in oracle.crossings if c.time > a + 1e-9)
    assert idx == accrued


def test_nullities_values_and_jump_location():
    space = canonical_space(1)
    pspace = product_space(space)
    gr1 = graph_frame(pspace, np.eye(2))
    assert nullities(space, np.eye(2), gr1) == (2, 2)
    assert nullities(space, np.diag([np.exp(1j), np.exp(-1j)]), gr1) == (0, 0)
    assert nullities(space, la.matrix_exp(np.pi * space.J),
                     graph_frame(pspace, -np.eye(2))) == (2, 2)


def test_winding_pair_canonical():
    space = canonical_space(1)
    loop = ExpPath(space, np.diag([2j * np.pi, 0.0]), domain=(0.0, 1.0))
    assert winding_pair(loop) == (1, 0)
    const = ConstantPath(space, random_symplectic(space, 2, scale=0.0), (0.0, 1.0))
    assert winding_pair(const) == (0, 0)


@pytest.mark.parametrize("seed", range(3))
def test_winding_pair_product_additivity(seed):
    space = canonical_space(2)
    rng = np.random.default_rng(seed)
    w1 = int(rng.integers(-2, 3))
    w2 = int(rng.integers(-2, 3))
    gen1 = np.diag([2j * np.pi * w1, 0.0, 0.0, 0.0])
    gen2 = np.diag([0.0, 0.0, -2j * np.pi * w2, 0.0])
    l1 = ExpPath(space, gen1, domain=(0.0, 1.0))
    l2 = ExpPath(space, gen2, domain=(0.0, 1.0))
    p1, p2 = winding_pair(l1), winding_pair(l2)
    prod = winding_pair(ProductPath(l1, l2))
    assert prod == (p1[0] + p2[0], p1[1] + p2[1])


def test_not_a_loop_raises():
    from maslov_iter.errors import NotALoop

    space = canonical_space(1)
    with pytest.raises(NotALoop):
        winding_pair(ExpPath(space, space.J, domain=(0.0, 1.0)))


def test_sign_flip_under_negated_J():
    plus = canonical_space(1)
    minus, _ = normalize_space(make_space(np.diag([-1j, 1j])))
    vals = []
    for sp in (plus, minus):
        path = ExpPath(sp, plus.J, domain=(0.0, 2 * np.pi))
        vals.append(graph_index(path, graph_frame(product_space(sp),
                                                  np.eye(2))).index)
    assert vals == [2, -2]
