import numpy as np
import pytest

from maslov_iter import linalg as la
from maslov_iter.decompositions import random_symplectic
from maslov_iter.errors import NotLagrangian, SpaceMismatch
from maslov_iter.frames import (
    LagrangianFrame,
    graph_frame,
    is_lagrangian,
    pair_index,
    product_lagrangian,
    product_space,
    random_lagrangian,
    reference_lagrangian,
    souriau_unitary,
    subspace_annihilator,
)
from maslov_iter.spaces import canonical_space


def _lam0(space):
    return LagrangianFrame(space, np.array([[1.0], [1.0]]) / np.sqrt(2))


def test_annihilator_examples():
    space = canonical_space(1)
    ann = subspace_annihilator(space, np.array([[1.0], [0.0]]))
    assert la.spans_equal(ann, np.array([[0.0], [1.0]]))
    lam0 = np.array([[1.0], [1.0]]) / np.sqrt(2)
    assert la.spans_equal(subspace_annihilator(space, lam0), lam0)
    assert subspace_annihilator(space, np.eye(2)).shape[1] == 0


@pytest.mark.parametrize("seed", range(5))
def test_annihilator_involution_on_lagrangians(seed):
    space = canonical_space(3)
    f = random_lagrangian(space, seed)
    assert is_lagrangian(space, f.columns)
    ann = subspace_annihilator(space, f.columns)
    assert la.spans_equal(ann, f.columns)


def test_lagrangian_frame_validation():
    space = canonical_space(1)
    with pytest.raises(NotLagrangian):
        LagrangianFrame(space, np.array([[1.0], [0.5]]))  # not isotropic
    with pytest.raises(NotLagrangian):
        LagrangianFrame(space, np.ones((2, 2)))  # wrong shape


def test_pair_index_examples_and_equivalence():
    space = canonical_space(1)
    lam0 = _lam0(space)
    p = pair_index(lam0, lam0)
    assert (p.dim_cap, p.codim_sum, p.index) == (1, 1, 0)
    mu = LagrangianFrame(space, np.array([[1.0], [-1.0]]) / np.sqrt(2))
    assert pair_index(lam0, mu) == type(p)(0, 0, 0)

    big = canonical_space(4)
    f, g = random_lagrangian(big, 11), random_lagrangian(big, 12)
    assert pair_index(f, g).index == 0
    G = np.triu(np.ones((4, 4))) + np.diag([1.0, 2.0, 0.5, 1.5])
    assert pair_index(f.transformed(G), g) == pair_index(f, g)


def test_pair_index_space_mismatch():
    with pytest.raises(SpaceMismatch):
        pair_index(_lam0(canonical_space(1)),
                   random_lagrangian(canonical_space(2), 1))


@pytest.mark.parametrize("seed", range(5))
def test_souriau_unitary_detects_intersections(seed):
    space = canonical_space(3)
    f = random_lagrangian(space, seed)
    g = random_lagrangian(space, seed + 100)
    wf, wg = souriau_unitary(space, f), souriau_unitary(space, g)
    assert la.opnorm(la.herm(wf) @ wf - np.eye(3)) < 1e-9
    rel = la.herm(wg) @ wf
    cap = pair_index(f, g).dim_cap
    eig_cap = int(np.sum(np.abs(np.angle(np.linalg.eigvals(rel))) < 1e-7))
    assert cap == eig_cap
    assert souriau_unitary(space, reference_lagrangian(space)) == pytest.approx(np.eye(3))


def test_graph_frames_are_lagrangian():
    space = canonical_space(2)
    pspace = product_space(space)
    M = random_symplectic(space, 3)
    gf = graph_frame(pspace, M)
    assert is_lagrangian(pspace, gf.columns)
    prod = product_lagrangian(pspace, random_lagrangian(space, 1).columns,
                              random_lagrangian(space, 2).columns)
    assert is_lagrangian(pspace, prod.columns)


def test_product_space_form():
    space = canonical_space(1)
    pspace = product_space(space)
    x = np.array([1.0, 0.0, 0.0, 0.0])
    y = np.array([0.0, 0.0, 1.0, 0.0])
    x1, x2 = x[:2], x[2:]
    y1, y2 = y[:2], y[2:]
    assert pspace.omega(x, y) == pytest.approx(
        -space.omega(x1, y1) + space.omega(x2, y2))
