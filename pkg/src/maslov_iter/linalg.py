"""Dense complex linear-algebra helpers.

Every rank decision in the package goes through :func:`numerical_rank`,
which refuses to guess when singular values land inside the ambiguity
band around the threshold: downstream results are integers and must not
silently flip with the tolerance.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import RankAmbiguous, RankDeficient, Singular

RANK_REL_TOL = 1e-8


def cmat(a) -> np.ndarray:
    """Coerce ``a`` to a 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return m


def herm(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def opnorm(a) -> float:
    """Spectral norm (0.0 for empty input)."""
    a = np.asarray(a, dtype=np.complex128)
    return float(np.linalg.norm(a, 2)) if a.size else 0.0


def hermitian_part(a) -> np.ndarray:
    a = cmat(a)
    return (a + herm(a)) / 2.0


def frozen(a: np.ndarray) -> np.ndarray:
    """Read-only view used for immutable value objects."""
    out = np.array(a, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def numerical_rank(a, rel_tol: float = RANK_REL_TOL, what: str = "matrix") -> int:
    """Numerical rank with an ambiguity guard.

    The threshold is ``rel_tol * s_max``.  Any singular value inside the
    open band ``(0.1, 10) * threshold`` raises :class:`RankAmbiguous`.
    """
    a = cmat(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return 0
    thr = rel_tol * smax
    in_band = (s > 0.1 * thr) & (s < 10.0 * thr)
    if np.any(in_band):
        bad = s[in_band]
        raise RankAmbiguous(
            f"{what}: singular values {bad} inside ({0.1 * thr:.3e}, {10 * thr:.3e})"
        )
    return int(np.count_nonzero(s > thr))


def null_space(a, rel_tol: float = RANK_REL_TOL, what: str = "matrix") -> np.ndarray:
    """Orthonormal basis of the (right) null space, with the rank guard."""
    a = cmat(a)
    rows, cols = a.shape
    if a.size == 0 or opnorm(a) == 0.0:
        return np.eye(cols, dtype=np.complex128)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    smax = float(s[0])
    thr = rel_tol * smax
    if np.any((s > 0.1 * thr) & (s < 10.0 * thr)):
        raise RankAmbiguous(f"{what}: null-space dimension ambiguous at tol {rel_tol:g}")
    r = int(np.count_nonzero(s > thr))
    return herm(vh)[:, r:]


def orthonormal_columns(a, rel_tol: float = RANK_REL_TOL, what: str = "frame") -> np.ndarray:
    """Orthonormal basis with the same span; requires full column rank."""
    a = cmat(a)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if a.shape[1] == 0:
        return a
    if s[0] == 0.0 or s[-1] <= rel_tol * s[0]:
        raise RankDeficient(f"{what}: columns not independent (s={s})")
    return u[:, : a.shape[1]]


def intersection_dim(f, g, rel_tol: float = RANK_REL_TOL) -> int:
    """dim(span f ∩ span g) for full-column-rank frames."""
    f, g = cmat(f), cmat(g)
    r = numerical_rank(np.hstack([f, g]), rel_tol, what="stacked frames")
    return f.shape[1] + g.shape[1] - r


def intersection_basis(f, g, rel_tol: float = RANK_REL_TOL) -> np.ndarray:
    """Orthonormal basis of span f ∩ span g."""
    f = orthonormal_columns(f, rel_tol)
    g = orthonormal_columns(g, rel_tol)
    ns = null_space(np.hstack([f, -g]), rel_tol, what="intersection")
    if ns.shape[1] == 0:
        return np.zeros((f.shape[0], 0), dtype=np.complex128)
    vecs = f @ ns[: f.shape[1], :]
    return orthonormal_columns(vecs, rel_tol)


def spans_equal(f, g, rel_tol: float = RANK_REL_TOL) -> bool:
    f, g = cmat(f), cmat(g)
    if f.shape[1] != g.shape[1]:
        return False
    rf = numerical_rank(f, rel_tol)
    return numerical_rank(np.hstack([f, g]), rel_tol) == rf


def hermitian_function(a, fn, *, positive: bool = False, rel_floor: float = 1e-13,
                       what: str = "matrix") -> np.ndarray:
    """Spectral calculus f(A) for (near-)Hermitian A via eigh."""
    h = hermitian_part(a)
    w, v = np.linalg.eigh(h)
    if positive and (w[0] <= 0.0 or w[0] <= rel_floor * abs(w[-1])):
        raise Singular(f"{what}: not positive definite (eigs in [{w[0]:.3e}, {w[-1]:.3e}])")
    return (v * fn(w)) @ herm(v)


def matrix_exp(a) -> np.ndarray:
    return scipy.linalg.expm(cmat(a))


def matrix_log(a) -> np.ndarray:
    out = scipy.linalg.logm(cmat(a))
    return np.asarray(out, dtype=np.complex128)


def unitary_eigensystem(u) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and orthonormal eigenvectors of a (near-)unitary matrix.

    Uses the complex Schur form; for normal input the Schur factor is
    diagonal up to roundoff, giving an orthonormal eigenbasis.
    """
    u = cmat(u)
    t, z = scipy.linalg.schur(u, output="complex")
    off = t - np.diag(np.diag(t))
    if opnorm(off) > 1e-8 * max(1.0, opnorm(t)):
        raise ValueError("matrix is too far from normal for a unitary eigensystem")
    return np.diag(t).copy(), z


def project_unitary(a) -> tuple[np.ndarray, float]:
    """Nearest unitary (polar factor) and the distance of singular values from 1."""
    a = cmat(a)
    u, s, vh = np.linalg.svd(a)
    defect = float(np.max(np.abs(s - 1.0))) if s.size else 0.0
    return u @ vh, defect


def log_unitary(u, *, branch_guard: float = 1e-8, branch_shift: float = 1e-6) -> np.ndarray:
    """Skew-Hermitian logarithm of a unitary matrix.

    The branch cut sits at angle pi; if an eigenvalue is within
    ``branch_guard`` of -1 the cut is rotated by ``branch_shift`` so the
    log stays continuous.
    """
    w, z = unitary_eigensystem(u)
    if np.any(np.abs(w + 1.0) < branch_guard):
        angles = np.angle(w * np.exp(-1j * branch_shift)) + branch_shift
    else:
        angles = np.angle(w)
    return (z * (1j * angles)) @ herm(z)


def blockdiag(*blocks) -> np.ndarray:
    return np.asarray(scipy.linalg.block_diag(*[cmat(b) for b in blocks]),
                      dtype=np.complex128)
