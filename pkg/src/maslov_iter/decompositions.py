"""Polar decomposition of symplectic matrices and random generators.

In a normalized space (J^2 = -I) every symplectic M factors uniquely as
M = A U with A positive-definite symplectic and U unitary symplectic;
A = exp(S) for a selfadjoint S in sp(H) that exchanges the J-eigenspaces,
and U is block-diagonal with respect to H+ (+) H-.  That triple is also
how we sample: random S12, random unitary blocks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import NotNormalized, NotSymplectic
from .spaces import NormalizedSpace, SymplecticSpace


@dataclass(frozen=True)
class PolarFactors:
    """M = A U with A = exp(S); blocks taken in the H+ (+) H- basis."""

    A: np.ndarray
    U: np.ndarray
    S: np.ndarray
    S12: np.ndarray
    U11: np.ndarray
    U22: np.ndarray
    residual: float
    off_block_residual: float


def _require_normalized(space: SymplecticSpace) -> NormalizedSpace:
    if not isinstance(space, NormalizedSpace):
        raise NotNormalized("operation needs a normalized space (J^2 = -I)")
    return space


def polar_decompose(space: SymplecticSpace, M) -> PolarFactors:
    """Split a symplectic matrix into positive and unitary symplectic factors."""
    nspace = _require_normalized(space)
    M = nspace.require_symplectic(M)
    A = la.hermitian_function(M @ la.herm(M), np.sqrt, positive=True, what="M M*")
    U, defect = la.project_unitary(np.linalg.solve(A, M))
    res = la.opnorm(A @ U - M) / max(1.0, la.opnorm(M))
    if res > 1e-8 or defect > 1e-8:
        raise NotSymplectic(f"polar factorisation failed (residual {res:.3e})")
    S = la.hermitian_function(M @ la.herm(M), lambda w: 0.5 * np.log(w),
                              positive=True, what="M M*")
    p, m = nspace.plus_basis, nspace.minus_basis
    S12 = la.herm(p) @ S @ m
    U11 = la.herm(p) @ U @ p
    U22 = la.herm(m) @ U @ m
    off = max(
        la.opnorm(la.herm(p) @ U @ m),
        la.opnorm(la.herm(m) @ U @ p),
        la.opnorm(la.herm(p) @ S @ p),
        la.opnorm(la.herm(m) @ S @ m),
    )
    return PolarFactors(A=la.frozen(A), U=la.frozen(U), S=la.frozen(S),
                        S12=la.frozen(S12), U11=la.frozen(U11), U22=la.frozen(U22),
                        residual=res, off_block_residual=off)


def assemble_symplectic(space: NormalizedSpace, S12, U11, U22) -> np.ndarray:
    """Build exp(S) (U11 (+) U22) from the coordinates of the polar splitting."""
    p, m = space.plus_basis, space.minus_basis
    S12 = la.cmat(S12)
    S = p @ S12 @ la.herm(m) + m @ la.herm(S12) @ la.herm(p)
    U = p @ la.cmat(U11) @ la.herm(p) + m @ la.cmat(U22) @ la.herm(m)
    return la.matrix_exp(S) @ U


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-like unitary via QR of a complex Gaussian with phase fix."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_symplectic(space: SymplecticSpace, seed, *, scale: float = 0.5) -> np.ndarray:
    """Seed-deterministic random symplectic matrix in a normalized space.

    ``scale`` multiplies the Gaussian S12 coordinate; 0 gives a unitary
    symplectic matrix.
    """
    nspace = _require_normalized(space)
    rng = np.random.default_rng(seed)
    np_, nm = nspace.n_plus, nspace.n_minus
    s12 = scale * (rng.standard_normal((np_, nm)) + 1j * rng.standard_normal((np_, nm)))
    if np_ and nm:
        s12 /= np.sqrt(np_ * nm) ** 0.5
    u11 = random_unitary(rng, np_)
    u22 = random_unitary(rng, nm)
    M = assemble_symplectic(nspace, s12, u11, u22)
    return nspace.require_symplectic(M, what="random symplectic")


def random_sp_element(space: SymplecticSpace, rng: np.random.Generator,
                      *, scale: float = 1.0) -> np.ndarray:
    """Random element of sp(H), spectral norm == scale.

    Solutions of A*J + JA = 0 are J^{-1} (Hermitian); the result is
    renormalized so path generators stay tame for ill-conditioned J.
    """
    d = space.dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    xi = np.linalg.solve(space.J, la.hermitian_part(g))
    return xi * (scale / max(la.opnorm(xi), 1e-12))


def positive_generator(space: SymplecticSpace, rng: np.random.Generator,
                       *, scale: float = 1.0, floor: float = 0.2) -> np.ndarray:
    """Generator X with -JX Hermitian positive definite (a positive path direction)."""
    d = space.dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = la.hermitian_part(g) / np.sqrt(d)
    w, v = np.linalg.eigh(h)
    pd = (v * (np.abs(w) + floor)) @ la.herm(v) * scale
    return -np.linalg.solve(space.J, pd)
