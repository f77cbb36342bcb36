"""Lagrangian frames, annihilators, pair indices and the unitary reduction.

A frame is a tall full-rank matrix whose column span is the subspace; all
operations are functions of the span only (right multiplication by an
invertible matrix does not change results).

In a normalized space every Lagrangian subspace is the graph of a unique
unitary from H+ to H-: if the columns of an orthonormal frame F split as
F = P+ A + P- B then sqrt(2) A and sqrt(2) B are unitary and the graph
map is U = 2 B A*.  Intersections of Lagrangians become eigenvalue-1
spaces of relative unitaries, which is what the winding index counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import NotLagrangian, RankDeficient, Singular
from .spaces import NormalizedSpace, SymplecticSpace


class LagrangianFrame:
    """Frame of a Lagrangian subspace; equivalence class under column ops."""

    def __init__(self, space: SymplecticSpace, columns, *, validate: bool = True):
        self.space = space
        cols = la.cmat(columns)
        if cols.shape != (space.dim, space.n):
            raise NotLagrangian(
                f"Lagrangian frame must be {space.dim}x{space.n}, got {cols.shape}"
            )
        self.columns = la.frozen(cols)
        self._ortho: np.ndarray | None = None
        if validate:
            q = self.orthonormal
            iso = la.opnorm(space.omega_gram(q, q)) / la.opnorm(space.J)
            if iso > max(space.tol.lagr, 1e-12) * 1e3:
                raise NotLagrangian(f"frame not isotropic: |F*JF| = {iso:.3e} |J|")

    @property
    def orthonormal(self) -> np.ndarray:
        if self._ortho is None:
            try:
                q = la.orthonormal_columns(self.columns, self.space.tol.lagr)
            except RankDeficient as exc:
                raise NotLagrangian(str(exc)) from exc
            self._ortho = la.frozen(q)
        return self._ortho

    def transformed(self, G) -> "LagrangianFrame":
        """Same subspace, frame right-multiplied by an invertible matrix."""
        return LagrangianFrame(self.space, self.columns @ la.cmat(G))

    def mapped(self, M) -> "LagrangianFrame":
        """Image frame under a symplectic matrix."""
        return LagrangianFrame(self.space, la.cmat(M) @ self.columns)

    def spans_same(self, other: "LagrangianFrame") -> bool:
        self.space.require_same(other.space)
        return la.spans_equal(self.orthonormal, other.orthonormal,
                              self.space.tol.rank_rel)


def subspace_annihilator(space: SymplecticSpace, F) -> np.ndarray:
    """Frame of {y : omega(f, y) = 0 for all frame columns f}."""
    F = la.cmat(F)
    if F.shape[1] and la.numerical_rank(F, space.tol.rank_rel) < F.shape[1]:
        raise RankDeficient("annihilator input frame is rank deficient")
    return la.null_space(la.herm(space.J @ F), space.tol.rank_rel, what="annihilator")


def is_lagrangian(space: SymplecticSpace, F) -> bool:
    """span F == its omega-annihilator."""
    F = la.cmat(F)
    ann = subspace_annihilator(space, F)
    return F.shape[1] == ann.shape[1] and la.spans_equal(F, ann, space.tol.rank_rel)


@dataclass(frozen=True)
class PairIndex:
    dim_cap: int
    codim_sum: int
    index: int


def pair_index(lam: LagrangianFrame, mu: LagrangianFrame) -> PairIndex:
    """Fredholm-pair data of two Lagrangians: always index 0 here."""
    lam.space.require_same(mu.space)
    f, g = lam.orthonormal, mu.orthonormal
    rel = lam.space.tol.rank_rel
    cap = la.null_space(np.hstack([f, -g]), rel, what="pair intersection").shape[1]
    r = la.numerical_rank(np.hstack([f, g]), rel, what="pair sum")
    codim = lam.space.dim - r
    idx = cap - codim
    assert idx == 0, f"Lagrangian pair with nonzero index {idx}"
    return PairIndex(dim_cap=cap, codim_sum=codim, index=idx)


def reference_lagrangian(space: NormalizedSpace) -> LagrangianFrame:
    """Graph of the identity unitary: columns (p_j^+ + p_j^-)/sqrt(2)."""
    space.require_lagrangians()
    cols = (space.plus_basis + space.minus_basis) / np.sqrt(2.0)
    return LagrangianFrame(space, cols)


def random_lagrangian(space: NormalizedSpace, seed, *, scale: float = 0.5) -> LagrangianFrame:
    """Image of the reference Lagrangian under a random symplectic map."""
    from .decompositions import random_symplectic

    return reference_lagrangian(space).mapped(random_symplectic(space, seed, scale=scale))


def souriau_unitary(space: NormalizedSpace, frame) -> np.ndarray:
    """Unitary graph map H+ -> H- of a Lagrangian subspace (coordinate matrix)."""
    space.require_lagrangians()
    q = frame.orthonormal if isinstance(frame, LagrangianFrame) else \
        la.orthonormal_columns(la.cmat(frame))
    a = la.herm(space.plus_basis) @ q
    b = la.herm(space.minus_basis) @ q
    u, defect = la.project_unitary(2.0 * (b @ la.herm(a)))
    if defect > 1e-6:
        raise NotLagrangian(f"graph map not unitary (defect {defect:.3e})")
    return u


# -- product space and graph Lagrangians ---------------------------------


class ProductSpace(SymplecticSpace):
    """X = H x H with structure map (-J) (+) J; graphs of symplectic maps
    are Lagrangian here."""

    def __init__(self, base: SymplecticSpace):
        self.base = base
        super().__init__(la.blockdiag(-base.J, base.J), base.tol)


class NormalizedProductSpace(ProductSpace, NormalizedSpace):
    def __init__(self, base: NormalizedSpace):
        ProductSpace.__init__(self, base)


def product_space(base: SymplecticSpace) -> ProductSpace:
    if isinstance(base, NormalizedSpace):
        return NormalizedProductSpace(base)
    return ProductSpace(base)


def graph_frame(pspace: ProductSpace, M) -> LagrangianFrame:
    """gr(M) = {(x, Mx)} as a Lagrangian frame in the product space."""
    M = pspace.base.require_symplectic(M, what="graph matrix")
    eye = np.eye(pspace.base.dim, dtype=np.complex128)
    return LagrangianFrame(pspace, np.vstack([eye, M]))


def product_lagrangian(pspace: ProductSpace, left, right) -> LagrangianFrame:
    """lambda x mu = {(x, y) : x in lambda, y in mu} inside the product space."""
    lcols = left.columns if isinstance(left, LagrangianFrame) else la.cmat(left)
    rcols = right.columns if isinstance(right, LagrangianFrame) else la.cmat(right)
    return LagrangianFrame(pspace, la.blockdiag(lcols, rcols))


def circle_graph_frame(pspace: ProductSpace, z: complex) -> LagrangianFrame:
    """gr(z I) for |z| = 1."""
    if abs(abs(z) - 1.0) > 1e-9:
        raise Singular(f"|z| must be 1, got {abs(z)}")
    return graph_frame(pspace, z * np.eye(pspace.base.dim))
