"""Iteration constructors for symplectic paths and the delta_k defect.

The k-th A-iteration extends a path gamma in P_tau to [0, k tau] by
gamma~(t) = A^j gamma(t - j tau) (A^{-1} gamma(tau))^j on the j-th
period; the brake iteration alternates gamma with its reflection
N gamma(2j tau - t) N and uses the two-period monodromy
N gamma(tau)^{-1} N gamma(tau).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .decompositions import polar_decompose
from .errors import ConfigError, DiscontinuousJunction
from .paths import SymplecticPath, register_node, matrix_to_json, matrix_from_json, path_from_dict
from .spaces import NormalizedSpace, SymplecticSpace


def _require_starts_at_identity(path: SymplecticPath) -> None:
    a = path.domain[0]
    start = path.value(a)
    if la.opnorm(start - np.eye(path.space.dim)) > 1e-9 * max(1.0, la.opnorm(start)):
        raise ConfigError("iteration input must start at the identity")


@dataclass(frozen=True)
class AIterationSpec:
    """Data of a k-th A-iteration: gamma in P_tau, twist A, repetition count."""

    path: SymplecticPath
    A: np.ndarray
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError("iteration count must be >= 1")
        if abs(self.path.domain[0]) > 1e-12:
            raise ConfigError("iteration input domain must start at 0")
        _require_starts_at_identity(self.path)
        self.path.space.require_symplectic(self.A, what="A")

    @property
    def tau(self) -> float:
        return self.path.domain[1]

    def poincare_map(self) -> np.ndarray:
        return np.linalg.solve(la.cmat(self.A), self.path.value(self.tau))


class AIteratePath(SymplecticPath):
    """gamma~(t) = A^j gamma(t - j tau) P^j with P = A^{-1} gamma(tau)."""

    def __init__(self, spec: AIterationSpec):
        super().__init__(spec.path.space, (0.0, spec.k * spec.tau))
        self.spec = spec
        P = spec.poincare_map()
        A = la.cmat(spec.A)
        self._a_pows = [np.linalg.matrix_power(A, j) for j in range(spec.k)]
        self._p_pows = [np.linalg.matrix_power(P, j) for j in range(spec.k)]
        self.exact_derivative = spec.path.exact_derivative
        self._check_junctions()

    def _piece(self, t: float) -> tuple[int, float]:
        tau, k = self.spec.tau, self.spec.k
        j = min(int(np.floor(t / tau)), k - 1) if t < k * tau else k - 1
        return j, t - j * tau

    def _value(self, t):
        j, s = self._piece(t)
        return self._a_pows[j] @ self.spec.path.value(s) @ self._p_pows[j]

    def _derivative(self, t):
        j, s = self._piece(t)
        return self._a_pows[j] @ self.spec.path.derivative(s) @ self._p_pows[j]

    def _check_junctions(self):
        tau = self.spec.tau
        for j in range(1, self.spec.k):
            left = self._a_pows[j - 1] @ self.spec.path.value(tau) @ self._p_pows[j - 1]
            right = self._a_pows[j] @ self.spec.path.value(0.0) @ self._p_pows[j]
            gap = la.opnorm(left - right) / max(1.0, la.opnorm(left))
            if gap > 1e-9:
                raise DiscontinuousJunction(f"A-iteration junction {j}: gap {gap:.3e}")

    def to_dict(self):
        return {"type": "a_iterate", "inner": self.spec.path.to_dict(),
                "matrix": matrix_to_json(self.spec.A), "k": self.spec.k}


def a_iterate(path: SymplecticPath, k: int, A=None) -> AIteratePath:
    """k-th A-iteration of a path in P_tau (A defaults to the identity)."""
    if A is None:
        A = np.eye(path.space.dim)
    return AIteratePath(AIterationSpec(path=path, A=la.frozen(la.cmat(A)), k=int(k)))


class BrakeIteratePath(SymplecticPath):
    """k-th N-brake iteration; two-period monodromy N gamma(tau)^{-1} N gamma(tau)."""

    def __init__(self, path: SymplecticPath, k: int, N):
        if k < 1:
            raise ConfigError("iteration count must be >= 1")
        if abs(path.domain[0]) > 1e-12:
            raise ConfigError("brake iteration input domain must start at 0")
        _require_starts_at_identity(path)
        super().__init__(path.space, (0.0, k * path.domain[1]))
        self.inner = path
        self.k = int(k)
        self.N = la.frozen(la.cmat(N))
        tau = path.domain[1]
        self.tau = tau
        g_tau = path.value(tau)
        monodromy = self.N @ np.linalg.inv(g_tau) @ self.N @ g_tau
        self._m_pows = [np.linalg.matrix_power(monodromy, j)
                        for j in range(k // 2 + 2)]
        self.exact_derivative = path.exact_derivative
        self._check_junctions()

    def poincare_map(self) -> np.ndarray:
        return self._m_pows[1]

    def _segment(self, t: float) -> tuple[int, float]:
        """Period index m in [0, k) and the local time inside it."""
        m = min(max(int(np.floor(t / self.tau)), 0), self.k - 1)
        return m, float(np.clip(t - m * self.tau, 0.0, self.tau))

    def _value(self, t):
        m, s = self._segment(t)
        if m % 2 == 0:
            return self.inner.value(s) @ self._m_pows[m // 2]
        return self.N @ self.inner.value(self.tau - s) @ self.N @ self._m_pows[(m + 1) // 2]

    def _derivative(self, t):
        m, s = self._segment(t)
        if m % 2 == 0:
            return self.inner.derivative(s) @ self._m_pows[m // 2]
        return -self.N @ self.inner.derivative(self.tau - s) @ self.N @ self._m_pows[(m + 1) // 2]

    def _check_junctions(self):
        tau = self.tau
        for m in range(1, self.k):
            t = m * tau
            left = self._value(t - 1e-13 * max(1.0, tau))
            right = self._value(t + 1e-13 * max(1.0, tau))
            here = self._value(t)
            gap = max(la.opnorm(left - here), la.opnorm(right - here))
            if gap / max(1.0, la.opnorm(here)) > 1e-8:
                raise DiscontinuousJunction(f"brake junction at t={t:g}: gap {gap:.3e}")

    def to_dict(self):
        return {"type": "brake_iterate", "inner": self.inner.to_dict(),
                "matrix": matrix_to_json(self.N), "k": self.k}


def brake_iterate(path: SymplecticPath, k: int, N) -> BrakeIteratePath:
    return BrakeIteratePath(path, k, N)


register_node("a_iterate", lambda space, obj: a_iterate(
    path_from_dict(space, obj["inner"]), int(obj["k"]), matrix_from_json(obj["matrix"])))
register_node("brake_iterate", lambda space, obj: brake_iterate(
    path_from_dict(space, obj["inner"]), int(obj["k"]), matrix_from_json(obj["matrix"])))


# -- canonical reference paths and the iteration defect --------------------


def reference_path(space: NormalizedSpace, M, domain=(0.0, 1.0)) -> SymplecticPath:
    """Canonical path from I to M through the polar coordinates.

    The positive factor is reached along exp(t S); each unitary block
    follows its spectral geodesic from the identity.
    """
    from .paths import ExpPath, ProductPath

    factors = polar_decompose(space, M)
    xi_u = la.log_unitary(factors.U)
    return ProductPath(ExpPath(space, factors.S, domain),
                       ExpPath(space, xi_u, domain))


def delta_k(space: NormalizedSpace, M, k: int, *, path: SymplecticPath | None = None) -> int:
    """Iteration defect i_1(gamma, k, I) - k i_1(gamma, 1, I) at gamma(tau) = M.

    Independent of the connecting path; the canonical polar-coordinate
    path is used unless one is supplied.
    """
    from .maslov import iz

    gamma = reference_path(space, M) if path is None else path
    tilde = a_iterate(gamma, k)
    return iz(tilde, 1.0) - k * iz(gamma, 1.0)
