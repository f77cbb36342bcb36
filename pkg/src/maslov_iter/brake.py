"""Brake symmetries: anti-symplectic involutions and their block algebra.

A brake symmetry is an involution N with N* J N = -J; its eigenspaces
U+ and U- are Lagrangian and H = U- (+) U+.  Everything here works in
the adapted basis where N = (-I) (+) I and J = [[0, -K*], [K, 0]] for an
injective block K (U- listed first).  Matrices M with (NM)^2 = I carry
the Chebyshev power structure: M^k has blocks T_k, U_{k-1} of the blocks
of M, and the kernels of M - e^{i a} are visible in the D block.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .chebyshev import brake_return_poly, cheb_t, cheb_u
from .decompositions import random_symplectic
from .errors import (
    BlockIdentityViolated,
    IdentityViolated,
    NotBrakeInvolution,
    Singular,
)
from .frames import LagrangianFrame, ProductSpace, product_lagrangian, product_space
from .spaces import SymplecticSpace, Tolerances, DEFAULT_TOL


class BrakeSymmetry:
    """Adapted-basis brake data: N = (-I) (+) I, J = [[0, -K*], [K, 0]]."""

    def __init__(self, K, tol: Tolerances = DEFAULT_TOL):
        K = la.cmat(K)
        n = K.shape[0]
        if K.shape != (n, n):
            raise NotBrakeInvolution("K must be square")
        s = np.linalg.svd(K, compute_uv=False)
        if s[-1] <= 1e-10 * max(1.0, s[0]):
            raise Singular("block map K must be injective")
        self.K = la.frozen(K)
        self.n = n
        J = np.zeros((2 * n, 2 * n), dtype=np.complex128)
        J[:n, n:] = -la.herm(K)
        J[n:, :n] = K
        self.space = SymplecticSpace(J, tol)
        N = np.diag(np.concatenate([-np.ones(n), np.ones(n)])).astype(np.complex128)
        self.N = la.frozen(N)
        eye = np.eye(2 * n, dtype=np.complex128)
        self.minus_frame = LagrangianFrame(self.space, eye[:, :n])
        self.plus_frame = LagrangianFrame(self.space, eye[:, n:])
        self._pspace: ProductSpace | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def random(cls, n: int, seed, *, tol: Tolerances = DEFAULT_TOL,
               sigma_floor: float = 0.1) -> "BrakeSymmetry":
        """Random injective K with singular values floored away from zero."""
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        u, s, vh = np.linalg.svd(g / np.sqrt(n))
        K = u @ np.diag(np.maximum(s, sigma_floor)) @ vh
        return cls(K, tol)

    @classmethod
    def from_involution(cls, space: SymplecticSpace, N,
                        tol: Tolerances | None = None) -> tuple["BrakeSymmetry", np.ndarray]:
        """Adapt a general anti-symplectic involution to the normal form.

        Returns (brake, P) where the columns of P are the adapted basis:
        matrices transport as P^{-1} M P, and the brake's space carries
        the transported structure map P* J P.
        """
        tol = tol or space.tol
        N = la.cmat(N)
        eye = np.eye(space.dim)
        if la.opnorm(N @ N - eye) > 1e-8:
            raise NotBrakeInvolution("N^2 != I")
        if la.opnorm(la.herm(N) @ space.J @ N + space.J) > 1e-8 * la.opnorm(space.J):
            raise NotBrakeInvolution("N* J N != -J")
        minus = la.orthonormal_columns(la.null_space(N + eye, tol.rank_rel))
        plus = la.orthonormal_columns(la.null_space(N - eye, tol.rank_rel))
        if minus.shape[1] != plus.shape[1]:
            raise NotBrakeInvolution("eigenspaces of N have unequal dimensions")
        P = np.hstack([minus, plus])
        J_adapted = la.herm(P) @ space.J @ P
        n = minus.shape[1]
        if la.opnorm(J_adapted[:n, :n]) > 1e-8 or la.opnorm(J_adapted[n:, n:]) > 1e-8:
            raise NotBrakeInvolution("eigenspaces of N are not Lagrangian")
        return cls(J_adapted[n:, :n], tol), P

    # -- derived objects ----------------------------------------------------

    @property
    def pspace(self) -> ProductSpace:
        if self._pspace is None:
            self._pspace = product_space(self.space)
        return self._pspace

    def product_frame(self, left: str, right: str) -> LagrangianFrame:
        """Lagrangian A x B in H x H with A, B in {'U+', 'U-'}."""
        pick = {"U+": self.plus_frame, "U-": self.minus_frame}
        return product_lagrangian(self.pspace, pick[left].columns, pick[right].columns)

    def random_symplectic(self, seed, *, scale: float = 0.5) -> np.ndarray:
        """Random symplectic matrix for this (non-normalized) structure map."""
        nspace, T = self.space.normalized()
        M_norm = random_symplectic(nspace, seed, scale=scale)
        return np.linalg.solve(T, M_norm) @ T

    def reflection_from(self, Q) -> np.ndarray:
        """S = N Q N Q^{-1}: symplectic with (NS)^2 = I."""
        Q = self.space.require_symplectic(Q, what="Q")
        S = self.N @ Q @ self.N @ np.linalg.inv(Q)
        self.space.require_symplectic(S, what="S")
        if la.opnorm((self.N @ S) @ (self.N @ S) - np.eye(2 * self.n)) > 1e-8:
            raise NotBrakeInvolution("(NS)^2 != I")
        return S

    def random_reflection(self, seed, *, scale: float = 0.5) -> np.ndarray:
        return self.reflection_from(self.random_symplectic(seed, scale=scale))

    def reflection_eigenframes(self, S) -> tuple[LagrangianFrame, LagrangianFrame]:
        """Lagrangian frames of V+- = ker(NS -+ I)."""
        NS = self.N @ la.cmat(S)
        eye = np.eye(2 * self.n)
        v_plus = la.null_space(NS - eye, self.space.tol.rank_rel)
        v_minus = la.null_space(NS + eye, self.space.tol.rank_rel)
        return (LagrangianFrame(self.space, v_plus),
                LagrangianFrame(self.space, v_minus))

    def require_brake_involutive(self, M) -> np.ndarray:
        M = self.space.require_symplectic(M, what="M")
        NM = self.N @ M
        res = la.opnorm(NM @ NM - np.eye(2 * self.n)) / max(1.0, la.opnorm(M) ** 2)
        if res > 1e-10:
            raise NotBrakeInvolution(f"(NM)^2 != I (residual {res:.3e})")
        return M

    def blocks(self, M) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(A, B, C, D) of M on U- (+) U+ (A maps U- to U-)."""
        n = self.n
        M = la.cmat(M)
        return M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]


@dataclass(frozen=True)
class ChebPower:
    """Block-evaluated power of a brake-involutive symplectic matrix."""

    power: np.ndarray
    direct: np.ndarray
    relative_error: float
    block_residuals: dict[str, float]


def cheb_power(brake: BrakeSymmetry, M, k: int) -> ChebPower:
    """M^k via Chebyshev blocks, cross-checked against direct powering.

    Also audits the structural identities of brake-involutive matrices:
    K-symmetries (KA = D*K, KB = B*K*, K*C = C*K) and the quadratic
    relations (AB = BD, CA = DC, A^2 - BC = I, D^2 - CB = I).
    """
    M = brake.require_brake_involutive(M)
    A, B, C, D = brake.blocks(M)
    K = brake.K
    eye_n = np.eye(brake.n)
    scale = max(1.0, la.opnorm(M)) ** 2
    residuals = {
        "KA=D*K": la.opnorm(K @ A - la.herm(D) @ K) / scale,
        "KB=B*K*": la.opnorm(K @ B - la.herm(B) @ la.herm(K)) / scale,
        "K*C=C*K": la.opnorm(la.herm(K) @ C - la.herm(C) @ K) / scale,
        "AB=BD": la.opnorm(A @ B - B @ D) / scale,
        "CA=DC": la.opnorm(C @ A - D @ C) / scale,
        "A^2-BC=I": la.opnorm(A @ A - B @ C - eye_n) / scale,
        "D^2-CB=I": la.opnorm(D @ D - C @ B - eye_n) / scale,
    }
    worst = max(residuals.values())
    if worst > 1e-9:
        raise BlockIdentityViolated(f"brake block identities fail: {residuals}")
    u_prev = cheb_u(k - 1, A)
    blocks = np.block([[cheb_t(k, A), u_prev @ B], [C @ u_prev, cheb_t(k, D)]])
    direct = np.linalg.matrix_power(M, k)
    rel = la.opnorm(blocks - direct) / max(1e-30, la.opnorm(direct))
    if rel > 1e-8:
        raise BlockIdentityViolated(f"Chebyshev power mismatch: {rel:.3e}")
    return ChebPower(power=blocks, direct=direct, relative_error=rel,
                     block_residuals=residuals)


def rotation_factor_residual(brake: BrakeSymmetry, M, alpha: float) -> float:
    """Residual of the factorisation (I - e^{-ia} M N)(M - e^{ia} I).

    Expanding with M N M = N gives M(I + N) - (e^{ia} I + e^{-ia} N),
    which is block *triangular* on U- (+) U+: diagonal blocks
    (-2i sin a) I and 2(D - cos a), off-diagonal block 2B.  Since the
    upper-left block is invertible for a outside pi Z, the kernel of
    M - e^{ia} I matches the kernel of D - (cos a) I.
    """
    M = brake.require_brake_involutive(M)
    lam = np.exp(1j * alpha)
    n = brake.n
    _, B, _, D = brake.blocks(M)
    eye = np.eye(2 * n)
    prod = (eye - M @ brake.N / lam) @ (M - lam * eye)
    expected = np.zeros_like(prod)
    expected[:n, :n] = -2j * np.sin(alpha) * np.eye(n)
    expected[:n, n:] = 2.0 * B
    expected[n:, n:] = 2.0 * (D - np.cos(alpha) * np.eye(n))
    return la.opnorm(prod - expected) / max(1.0, la.opnorm(M) ** 2)


def rotation_kernel_match(brake: BrakeSymmetry, M, alpha: float) -> tuple[int, int]:
    """(dim ker(D - cos a), dim ker(M - e^{ia})), equal for a outside pi Z."""
    M = brake.require_brake_involutive(M)
    _, _, _, D = brake.blocks(M)
    space = brake.space
    d_dim = brake.n - la.numerical_rank(D - np.cos(alpha) * np.eye(brake.n),
                                        space.tol.rank_rel) \
        if la.opnorm(D - np.cos(alpha) * np.eye(brake.n)) > 1e-12 else brake.n
    return d_dim, kernel_dim(space, M, np.exp(1j * alpha))


# -- nullity computations --------------------------------------------------


def kernel_dim(space: SymplecticSpace, M, z: complex) -> int:
    """dim ker(M - z I) with the guarded rank rule."""
    M = la.cmat(M)
    d = M.shape[0]
    delta = M - complex(z) * np.eye(d)
    scale = max(la.opnorm(M), 1.0)
    if la.opnorm(delta) <= 1e-12 * scale:
        return d
    return d - la.numerical_rank(delta / scale, space.tol.rank_rel,
                                 what=f"ker(M - {z:.3g} I)")


def restricted_nullity(space: SymplecticSpace, M, domain_frame, image_frame) -> int:
    """dim {x in domain : M x in image} (the graph-vs-product nullity)."""
    dom = domain_frame.columns if isinstance(domain_frame, LagrangianFrame) \
        else la.cmat(domain_frame)
    img = image_frame.columns if isinstance(image_frame, LagrangianFrame) \
        else la.cmat(image_frame)
    mapped = la.orthonormal_columns(la.cmat(M) @ dom)
    img = la.orthonormal_columns(img)
    return la.null_space(np.hstack([mapped, -img]), space.tol.rank_rel,
                         what="restricted nullity").shape[1]


def restricted_conullity(space: SymplecticSpace, M, domain_frame, image_frame) -> int:
    """Co-nullity dim(X / (gr(M) + domain x image))."""
    dom = domain_frame.columns if isinstance(domain_frame, LagrangianFrame) \
        else la.cmat(domain_frame)
    img = image_frame.columns if isinstance(image_frame, LagrangianFrame) \
        else la.cmat(image_frame)
    d = space.dim
    M = la.cmat(M)
    graph = np.vstack([np.eye(d), M])
    graph = la.orthonormal_columns(graph)
    prod = la.blockdiag(la.orthonormal_columns(dom), la.orthonormal_columns(img))
    r = la.numerical_rank(np.hstack([graph, prod]), space.tol.rank_rel,
                          what="restricted conullity")
    return 2 * d - r


def split_nullity_power(space: SymplecticSpace, M, k: int) -> dict:
    """Check dim ker(M^k - I) = sum over k-th roots z of dim ker(M - z I)."""
    M = space.require_symplectic(M)
    roots = [np.exp(2j * np.pi * j / k) for j in range(k)]
    per_root = {j: kernel_dim(space, M, z) for j, z in enumerate(roots)}
    total = kernel_dim(space, np.linalg.matrix_power(M, k), 1.0)
    if total != sum(per_root.values()):
        raise IdentityViolated(
            f"power nullity splitting failed: {total} != {per_root}"
        )
    return {"per_root": per_root, "total": total, "k": k}


def split_nullity_brake(brake: BrakeSymmetry, *, P=None, M=None, k: int = 2,
                        alpha: float = 0.7) -> dict:
    """Exercise the brake nullity splittings as exact integer identities.

    With P given, M = N P^{-1} N P; checks both two-times splittings
    (nullity and co-nullity), the k-power splitting for (NM)^2 = I, the
    odd splitting for P M^k when available, the rotation factorisation,
    and the B3 = B1 R_k(D) block relation.
    """
    space = brake.space
    up, um = brake.plus_frame, brake.minus_frame
    out: dict = {"k": k}
    if M is None:
        if P is None:
            raise ValueError("need P or M")
        P = space.require_symplectic(P, what="P")
        M = brake.N @ np.linalg.inv(P) @ brake.N @ P
    M = brake.require_brake_involutive(M)

    if P is not None:
        lhs = restricted_nullity(space, M, up, up)
        rhs = (restricted_nullity(space, P, up, up)
               + restricted_nullity(space, P, up, um))
        if lhs != rhs:
            raise IdentityViolated(f"two-times nullity splitting: {lhs} != {rhs}")
        lhs_co = restricted_conullity(space, M, up, up)
        rhs_co = (restricted_conullity(space, P, up, up)
                  + restricted_conullity(space, P, up, um))
        if lhs_co != rhs_co:
            raise IdentityViolated(f"two-times co-nullity splitting: {lhs_co} != {rhs_co}")
        out["two_times"] = {"lhs": lhs, "rhs": rhs, "lhs_co": lhs_co, "rhs_co": rhs_co}

    mk = np.linalg.matrix_power(M, k)
    lhs_k = restricted_nullity(space, mk, up, up)
    terms_k = [restricted_nullity(space, M, up, up)]
    terms_k += [kernel_dim(space, M, np.exp(1j * j * np.pi / k)) for j in range(1, k)]
    if lhs_k != sum(terms_k):
        raise IdentityViolated(f"k-power brake nullity splitting: {lhs_k} != {terms_k}")
    lhs_k_co = restricted_conullity(space, mk, up, up)
    if lhs_k_co != lhs_k:
        raise IdentityViolated("finite-dimensional conullity mismatch")
    out["power"] = {"lhs": lhs_k, "terms": terms_k}

    if P is not None:
        pmk = la.cmat(P) @ mk
        lhs_o = restricted_nullity(space, pmk, up, up)
        terms_o = [restricted_nullity(space, P, up, up)]
        terms_o += [kernel_dim(space, M, np.exp(2j * np.pi * j / (2 * k + 1)))
                    for j in range(1, k + 1)]
        if lhs_o != sum(terms_o):
            raise IdentityViolated(f"odd brake nullity splitting: {lhs_o} != {terms_o}")
        out["odd"] = {"lhs": lhs_o, "terms": terms_o}

        # B3 = B1 R_k(D) ties the blocks of P M^k to those of P and M.
        _, b1, _, _ = brake.blocks(P)
        _, _, _, d_blk = brake.blocks(M)
        _, b3, _, _ = brake.blocks(pmk)
        res = la.opnorm(b3 - b1 @ brake_return_poly(k, d_blk)) / \
            max(1.0, la.opnorm(pmk))
        if res > 1e-8:
            raise BlockIdentityViolated(f"B3 != B1 R_k(D): residual {res:.3e}")
        out["b3_residual"] = res

    res_rot = rotation_factor_residual(brake, M, alpha)
    if res_rot > 1e-9:
        raise BlockIdentityViolated(f"rotation factorisation residual {res_rot:.3e}")
    out["rotation_residual"] = res_rot
    d_ker, m_ker = rotation_kernel_match(brake, M, alpha)
    if d_ker != m_ker:
        raise IdentityViolated(f"D-block kernel {d_ker} != matrix kernel {m_ker}")
    out["rotation_kernel"] = d_ker
    return out


def reflection_kernel_split(brake: BrakeSymmetry, M, S) -> dict:
    """ker(N M^{-1} N M - S) = ker C (+) ker B in the V/U block splitting.

    Blocks of M are taken as a map V+ (+) V- -> U+ (+) U-; also audits
    M N (R - S) = N M - M N S with antidiagonal blocks (0, 2B; -2C, 0).
    """
    space = brake.space
    M = space.require_symplectic(M)
    S = space.require_symplectic(S, what="S")
    v_plus, v_minus = brake.reflection_eigenframes(S)
    n = brake.n
    mf_p = la.cmat(M) @ v_plus.columns
    mf_m = la.cmat(M) @ v_minus.columns
    B_blk = mf_m[n:, :]   # V- -> U+
    C_blk = mf_p[:n, :]   # V+ -> U-
    R = brake.N @ np.linalg.inv(M) @ brake.N @ M
    lhs = kernel_dim(space, np.linalg.solve(la.cmat(S), R), 1.0)
    rel = space.tol.rank_rel
    dims = {
        "ker_C": v_plus.columns.shape[1] - la.numerical_rank(C_blk, rel)
        if la.opnorm(C_blk) > 1e-12 else v_plus.columns.shape[1],
        "ker_B": v_minus.columns.shape[1] - la.numerical_rank(B_blk, rel)
        if la.opnorm(B_blk) > 1e-12 else v_minus.columns.shape[1],
    }
    if lhs != dims["ker_C"] + dims["ker_B"]:
        raise IdentityViolated(f"reflection kernel splitting: {lhs} != {dims}")

    E = brake.N @ M - M @ brake.N @ S
    e_p = la.cmat(E) @ v_plus.columns
    e_m = la.cmat(E) @ v_minus.columns
    scale = max(1.0, la.opnorm(M))
    res = max(
        la.opnorm(e_p[n:, :]) / scale,
        la.opnorm(e_p[:n, :] + 2.0 * C_blk) / scale,
        la.opnorm(e_m[n:, :] - 2.0 * B_blk) / scale,
        la.opnorm(e_m[:n, :]) / scale,
    )
    if res > 1e-8:
        raise BlockIdentityViolated(f"MN(R - S) antidiagonal residual {res:.3e}")
    return {"lhs": lhs, **dims, "antidiagonal_residual": res}
