"""Complex symplectic spaces and the J^2 = -I normal form.

A space is a pair (C^{2n}, J) with J skew-adjoint and invertible; the
form is omega(x, y) = <Jx, y> with the inner product conjugate-linear in
the FIRST slot.  Flipping that slot convention is equivalent to J -> -J
and negates every index computed downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import linalg as la
from .errors import (
    NoLagrangians,
    NotNormalized,
    NotSkewAdjoint,
    NotSpAlgebra,
    NotSymplectic,
    OddDimension,
    Singular,
    SpaceMismatch,
)


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances used by validation and rank decisions."""

    struct: float = 1e-9
    sympl: float = 1e-9
    lagr: float = 1e-9
    rank_rel: float = 1e-8

    def with_(self, **kw) -> "Tolerances":
        return replace(self, **kw)


DEFAULT_TOL = Tolerances()


class SymplecticSpace:
    """Finite-dimensional complex symplectic space (C^{2n}, omega)."""

    def __init__(self, J, tol: Tolerances = DEFAULT_TOL):
        J = la.cmat(J)
        rows, cols = J.shape
        if rows != cols:
            raise OddDimension(f"structure map must be square, got {J.shape}")
        if rows % 2 != 0:
            raise OddDimension(f"structure map must have even size, got {rows}")
        jnorm = la.opnorm(J)
        if jnorm == 0.0:
            raise Singular("structure map is zero")
        if la.opnorm(J + la.herm(J)) > tol.struct * jnorm:
            raise NotSkewAdjoint("J* != -J beyond tolerance")
        s = np.linalg.svd(J, compute_uv=False)
        if s[-1] <= tol.struct * s[0]:
            raise Singular(f"structure map is singular (s_min={s[-1]:.3e})")
        self.J = la.frozen(J)
        self.dim = rows
        self.n = rows // 2
        self.tol = tol
        self._normalized: tuple["NormalizedSpace", np.ndarray] | None = None

    # -- form -----------------------------------------------------------

    def omega(self, x, y) -> complex:
        """omega(x, y) = <Jx, y>, conjugate-linear in x."""
        return complex(np.vdot(self.J @ np.asarray(x, dtype=np.complex128), y))

    def omega_gram(self, F, G) -> np.ndarray:
        """Matrix of omega(f_i, g_j) for frame columns."""
        return la.herm(self.J @ la.cmat(F)) @ la.cmat(G)

    # -- membership checks ----------------------------------------------

    def symplectic_residual(self, M) -> float:
        M = la.cmat(M)
        return la.opnorm(la.herm(M) @ self.J @ M - self.J) / la.opnorm(self.J)

    def is_symplectic(self, M, tol: float | None = None) -> bool:
        return self.symplectic_residual(M) <= (self.tol.sympl if tol is None else tol)

    def require_symplectic(self, M, what: str = "matrix") -> np.ndarray:
        # Backward-stable criterion: computed products of symplectic
        # factors carry roundoff on the scale of ||M||^2.
        M = la.cmat(M)
        res = self.symplectic_residual(M) / max(1.0, la.opnorm(M) ** 2)
        if res > self.tol.sympl:
            raise NotSymplectic(f"{what}: ||M*JM - J|| = {res:.3e} ||J|| ||M||^2")
        return M

    def sp_residual(self, A) -> float:
        A = la.cmat(A)
        scale = la.opnorm(self.J) * max(1.0, la.opnorm(A))
        return la.opnorm(la.herm(A) @ self.J + self.J @ A) / scale

    def require_sp(self, A, what: str = "generator") -> np.ndarray:
        A = la.cmat(A)
        if self.sp_residual(A) > self.tol.struct * 100:
            raise NotSpAlgebra(f"{what}: ||A*J + JA|| too large")
        return A

    def require_same(self, other: "SymplecticSpace") -> None:
        if other is self:
            return
        if other.dim != self.dim or la.opnorm(other.J - self.J) > \
                self.tol.struct * max(1.0, la.opnorm(self.J)):
            raise SpaceMismatch("operands live on different symplectic spaces")

    # -- normal form ------------------------------------------------------

    def normalized(self) -> tuple["NormalizedSpace", np.ndarray]:
        """Memoized (NormalizedSpace, T) with T the symplectic transfer map."""
        if self._normalized is None:
            self._normalized = normalize_space(self)
        return self._normalized

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}(dim={self.dim})"


class NormalizedSpace(SymplecticSpace):
    """Symplectic space with J^2 = -I and the eigenspace splitting.

    ``plus_basis`` / ``minus_basis`` hold orthonormal bases of
    ker(J - iI) and ker(J + iI).
    """

    def __init__(self, J, tol: Tolerances = DEFAULT_TOL):
        super().__init__(J, tol)
        if la.opnorm(self.J @ self.J + np.eye(self.dim)) > 1e3 * tol.struct:
            raise NotNormalized("J^2 != -I; call normalize_space first")
        w, v = np.linalg.eigh(-1j * self.J)
        if np.any(np.abs(np.abs(w) - 1.0) > 1e-8):
            raise NotNormalized(f"eigenvalues of -iJ not at +-1: {w}")
        self.minus_basis = la.frozen(v[:, w < 0])
        self.plus_basis = la.frozen(v[:, w > 0])
        self.n_plus = self.plus_basis.shape[1]
        self.n_minus = self.minus_basis.shape[1]
        self._normalized = (self, np.eye(self.dim, dtype=np.complex128))

    def require_lagrangians(self) -> None:
        if self.n_plus != self.n_minus:
            raise NoLagrangians(
                f"no Lagrangian subspaces: dim H+ = {self.n_plus}, dim H- = {self.n_minus}"
            )


def make_space(J, tol: Tolerances = DEFAULT_TOL) -> SymplecticSpace:
    """Validate a structure map and build the space it defines."""
    return SymplecticSpace(J, tol)


def canonical_space(n: int, tol: Tolerances = DEFAULT_TOL) -> NormalizedSpace:
    """(C^{2n}, J0) with J0 = diag(i, ..., i, -i, ..., -i)."""
    if n < 1:
        raise OddDimension("need n >= 1")
    diag = np.concatenate([np.full(n, 1j), np.full(n, -1j)])
    return NormalizedSpace(np.diag(diag), tol)


def normalize_space(space: SymplecticSpace) -> tuple[NormalizedSpace, np.ndarray]:
    """Normal form J1 = (-J^2)^{-1/2} J plus the transfer map T = (-J^2)^{1/4}.

    T is symplectic from (H, omega) to (H, omega_1): frames map as
    F -> T F, matrices conjugate as M -> T M T^{-1}.
    """
    if isinstance(space, NormalizedSpace):
        return space, np.eye(space.dim, dtype=np.complex128)
    B = la.hermitian_part(-(space.J @ space.J))
    inv_sqrt = la.hermitian_function(B, lambda w: w ** -0.5, positive=True,
                                     what="-J^2")
    J1 = inv_sqrt @ space.J
    T = la.hermitian_function(B, lambda w: w ** 0.25, positive=True)
    nspace = NormalizedSpace(J1, space.tol)
    return nspace, T


def transfer_matrix(T: np.ndarray, M) -> np.ndarray:
    """Conjugation carrying Sp(H, omega) to Sp(H, omega_1): M -> T M T^{-1}."""
    T = la.cmat(T)
    return T @ la.cmat(M) @ np.linalg.inv(T)
