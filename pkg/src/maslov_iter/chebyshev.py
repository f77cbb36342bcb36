"""Chebyshev polynomials (integer coefficients) and matrix evaluation.

T_k and U_k satisfy T_k(cos a) = cos(ka) and U_k(cos a) =
sin((k+1)a)/sin(a); R_k(x) = (x+1) U_{k-1}(x) + T_k(x) evaluates to
sin((k+1/2)a)/sin(a/2) at cos(a).  These drive the block structure of
powers of brake-involutive symplectic matrices.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import linalg as la


def _recurrence(k: int, c0: tuple[int, ...], c1: tuple[int, ...], fn) -> tuple[int, ...]:
    """p_k = 2x p_{k-1} - p_{k-2} from the two seed polynomials."""
    prev2, prev1 = fn(k - 2), fn(k - 1)
    out = [0] * (k + 1)
    for i, c in enumerate(prev1):
        out[i + 1] += 2 * c
    for i, c in enumerate(prev2):
        out[i] -= c
    return tuple(out)


@lru_cache(maxsize=None)
def chebyshev_t_coeffs(k: int) -> tuple[int, ...]:
    """Coefficients of T_k, lowest degree first, exact integers."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return (1,)
    if k == 1:
        return (0, 1)
    return _recurrence(k, (1,), (0, 1), chebyshev_t_coeffs)


@lru_cache(maxsize=None)
def chebyshev_u_coeffs(k: int) -> tuple[int, ...]:
    """Coefficients of U_k (U_{-1} = 0), lowest degree first."""
    if k < -1:
        raise ValueError("k must be >= -1")
    if k == -1:
        return (0,)
    if k == 0:
        return (1,)
    if k == 1:
        return (0, 2)
    return _recurrence(k, (1,), (0, 2), chebyshev_u_coeffs)


@lru_cache(maxsize=None)
def brake_return_coeffs(k: int) -> tuple[int, ...]:
    """R_k = (x + 1) U_{k-1} + T_k, the odd-iteration zero locator."""
    u = chebyshev_u_coeffs(k - 1)
    t = chebyshev_t_coeffs(k)
    out = [0] * (k + 1)
    for i, c in enumerate(u):
        out[i] += c
        if c:
            out[i + 1] += c
    for i, c in enumerate(t):
        out[i] += c
    return tuple(out)


def eval_poly_scalar(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def eval_poly_matrix(coeffs, m) -> np.ndarray:
    m = la.cmat(m)
    acc = np.zeros_like(m)
    eye = np.eye(m.shape[0], dtype=np.complex128)
    for c in reversed(coeffs):
        acc = acc @ m + c * eye
    return acc


def cheb_t(k: int, x):
    """T_k of a scalar or square matrix."""
    c = chebyshev_t_coeffs(k)
    return eval_poly_matrix(c, x) if np.ndim(x) == 2 else eval_poly_scalar(c, x)


def cheb_u(k: int, x):
    """U_k of a scalar or square matrix (k = -1 gives 0)."""
    c = chebyshev_u_coeffs(k)
    return eval_poly_matrix(c, x) if np.ndim(x) == 2 else eval_poly_scalar(c, x)


def brake_return_poly(k: int, x):
    """R_k of a scalar or square matrix."""
    c = brake_return_coeffs(k)
    return eval_poly_matrix(c, x) if np.ndim(x) == 2 else eval_poly_scalar(c, x)
