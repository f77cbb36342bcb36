"""Maslov-type indices of Lagrangian pair paths and symplectic path graphs.

Two independent algorithms live here and in :mod:`.crossings`:

* the authoritative winding method (`maslov_pairs`, `graph_index`):
  reduce both Lagrangians to their unitary graph maps, form the relative
  unitary W(t) = U(mu)^{-1} U(lambda) on H+, and count signed eigenvalue
  passes through the gauge point;
* the crossing-form oracle (`maslov_pairs_crossingform`): locate
  crossings, classify their Hermitian forms, and sum signatures with the
  same endpoint convention.

Both return integers; acceptance identities compare them exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .decompositions import polar_decompose
from .errors import IdentityMismatch, NotALoop, SpaceMismatch
from .frames import (
    LagrangianFrame,
    ProductSpace,
    circle_graph_frame,
    graph_frame,
    product_space,
    souriau_unitary,
)
from .paths import ConstantPath, ProductPath, SymplecticPath
from .spaces import NormalizedSpace, SymplecticSpace
from .winding import det_phase_winding, gauge_winding

CONVENTION = "souriau-winding/gauge-ccw-of-1/positive-arrival/v1"


# -- Lagrangian-valued paths ----------------------------------------------


class LagrangianPath:
    """Path of Lagrangian frames over a real interval."""

    def __init__(self, space: SymplecticSpace, domain: tuple[float, float]):
        self.space = space
        self.domain = (float(domain[0]), float(domain[1]))

    def frame(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def frame_derivative(self, t: float) -> np.ndarray:
        raise NotImplementedError


class ConstantLagrangianPath(LagrangianPath):
    def __init__(self, frame: LagrangianFrame, domain=(0.0, 1.0)):
        super().__init__(frame.space, domain)
        self._frame = frame

    def frame(self, t):
        return self._frame.columns

    def frame_derivative(self, t):
        return np.zeros_like(self._frame.columns)


class PushedLagrangianPath(LagrangianPath):
    """t -> gamma(t) lambda_0 for a symplectic path gamma."""

    def __init__(self, path: SymplecticPath, base: LagrangianFrame):
        path.space.require_same(base.space)
        super().__init__(path.space, path.domain)
        self.path = path
        self.base = base

    def frame(self, t):
        return self.path.value(t) @ self.base.columns

    def frame_derivative(self, t):
        return self.path.derivative(t) @ self.base.columns


class GraphLagrangianPath(LagrangianPath):
    """t -> gr(gamma(t)) inside the product space."""

    def __init__(self, pspace: ProductSpace, path: SymplecticPath):
        pspace.base.require_same(path.space)
        super().__init__(pspace, path.domain)
        self.path = path

    def frame(self, t):
        eye = np.eye(self.path.space.dim, dtype=np.complex128)
        return np.vstack([eye, self.path.value(t)])

    def frame_derivative(self, t):
        zero = np.zeros((self.path.space.dim, self.path.space.dim))
        return np.vstack([zero, self.path.derivative(t)])


# -- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class CrossingRecord:
    """One crossing: time, intersection frame, Hermitian form, signature."""

    time: float
    frame: np.ndarray
    form: np.ndarray
    signature: tuple[int, int, int]   # (m_plus, m_zero, m_minus)
    contribution: int

    @property
    def nullity(self) -> int:
        return sum(self.signature)


@dataclass
class IndexReport:
    index: int
    method: str
    crossings: list[CrossingRecord] = field(default_factory=list)
    subdivision_depth: int = 0
    gauge_eps: float = 0.0
    convention: str = CONVENTION
    trace: tuple[np.ndarray, np.ndarray] | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "method": self.method,
            "subdivision_depth": self.subdivision_depth,
            "gauge_eps": self.gauge_eps,
            "convention": self.convention,
            "crossings": [
                {
                    "time": c.time,
                    "nullity": c.nullity,
                    "signature": list(c.signature),
                    "contribution": c.contribution,
                }
                for c in self.crossings
            ],
        }


class SouriauPair:
    """Normalized relative-unitary view of a pair of Lagrangian paths."""

    def __init__(self, lam: LagrangianPath, mu: LagrangianPath):
        lam.space.require_same(mu.space)
        if lam.domain != mu.domain:
            raise SpaceMismatch("paths must share a domain")
        self.lam, self.mu = lam, mu
        self.domain = lam.domain
        self.nspace, self.transfer = lam.space.normalized()
        self.nspace.require_lagrangians()
        self._is_identity_transfer = isinstance(lam.space, NormalizedSpace)

    def _transferred(self, cols: np.ndarray) -> np.ndarray:
        return cols if self._is_identity_transfer else self.transfer @ cols

    def relative_unitary(self, t: float) -> np.ndarray:
        ul = souriau_unitary(self.nspace, self._transferred(self.lam.frame(t)))
        um = souriau_unitary(self.nspace, self._transferred(self.mu.frame(t)))
        return la.herm(um) @ ul

    def intersection_angles(self, t: float) -> np.ndarray:
        w = np.linalg.eigvals(self.relative_unitary(t))
        return np.angle(w / np.abs(w))


def maslov_pairs(lam: LagrangianPath, mu: LagrangianPath,
                 interval: tuple[float, float] | None = None, *,
                 collect_trace: bool = False) -> IndexReport:
    """Maslov index of the pair path by the winding method."""
    pair = SouriauPair(lam, mu)
    a, b = interval if interval is not None else pair.domain
    count = gauge_winding(pair.relative_unitary, float(a), float(b),
                          collect_trace=collect_trace)
    report = IndexReport(index=count.index, method="winding",
                         subdivision_depth=count.depth, gauge_eps=count.gauge_eps)
    if collect_trace:
        report.trace = count.trace()
    return report


def maslov_pairs_crossingform(lam: LagrangianPath, mu: LagrangianPath,
                              interval: tuple[float, float] | None = None) -> IndexReport:
    """Independent crossing-form computation (oracle; nondegenerate only)."""
    from .crossings import crossing_form_index

    return crossing_form_index(lam, mu, interval)


def graph_index(path: SymplecticPath, V, interval=None, *,
                collect_trace: bool = False, method: str = "winding") -> IndexReport:
    """Index i_V(gamma) of a symplectic path against a Lagrangian V in H x H."""
    pspace, _ = _product_setting(path, V)
    lam = GraphLagrangianPath(pspace, path)
    mu = ConstantLagrangianPath(_as_frame(pspace, V), path.domain)
    if method == "winding":
        return maslov_pairs(lam, mu, interval, collect_trace=collect_trace)
    if method == "crossing-form":
        return maslov_pairs_crossingform(lam, mu, interval)
    raise ValueError(f"unknown method {method!r}")


def _product_setting(path: SymplecticPath, V) -> tuple[ProductSpace, LagrangianFrame]:
    if isinstance(V, LagrangianFrame) and isinstance(V.space, ProductSpace):
        V.space.base.require_same(path.space)
        return V.space, V
    pspace = product_space(path.space)
    return pspace, _as_frame(pspace, V)


def _as_frame(pspace: ProductSpace, V) -> LagrangianFrame:
    if isinstance(V, LagrangianFrame):
        pspace.require_same(V.space)
        return V
    return LagrangianFrame(pspace, V)


def nullities(space: SymplecticSpace, M, V) -> tuple[int, int]:
    """nu = dim(gr(M) cap V) and the co-nullity dim(X / (gr(M) + V))."""
    if isinstance(V, LagrangianFrame) and isinstance(V.space, ProductSpace):
        pspace = V.space
        pspace.base.require_same(space)
    else:
        pspace = product_space(space)
        V = _as_frame(pspace, V)
    g = graph_frame(pspace, M)
    rel = pspace.tol.rank_rel
    nu = la.intersection_dim(g.orthonormal, V.orthonormal, rel)
    r = la.numerical_rank(np.hstack([g.orthonormal, V.orthonormal]), rel)
    nu_tilde = pspace.dim - r
    assert nu <= nu_tilde
    assert nu == nu_tilde, "finite-dimensional Lagrangian pair with nu != nu~"
    return nu, nu_tilde


def graph_nullity(space: SymplecticSpace, M, N, rel_tol: float | None = None) -> int:
    """nu_{gr(N)}(M) = dim ker(M - N), computed directly."""
    rel = space.tol.rank_rel if rel_tol is None else rel_tol
    M, N = la.cmat(M), la.cmat(N)
    d = M.shape[0]
    delta = M - N
    if la.opnorm(delta) <= 1e-12 * max(1.0, la.opnorm(M)):
        return d
    scale = max(la.opnorm(M), la.opnorm(N))
    return d - la.numerical_rank(delta / scale, rel, what="kernel of M - N")


def index_vs_N(path: SymplecticPath, N, interval=None) -> int:
    """i_{gr(N)}(gamma) computed three equivalent ways, cross-asserted."""
    space = path.space
    N = space.require_symplectic(N, what="N")
    n_inv = np.linalg.inv(N)
    direct = graph_index(path, graph_frame(product_space(space), N), interval).index
    right = graph_index(ProductPath(path, ConstantPath(space, n_inv, path.domain)),
                        _gr_identity(space), interval).index
    left = graph_index(ProductPath(ConstantPath(space, n_inv, path.domain), path),
                       _gr_identity(space), interval).index
    if not direct == right == left:
        raise IdentityMismatch(
            f"i_N three-way disagreement: direct={direct}, gammaN^-1={right}, N^-1gamma={left}"
        )
    return direct


def _gr_identity(space: SymplecticSpace) -> LagrangianFrame:
    return graph_frame(product_space(space), np.eye(space.dim))


def iz(path: SymplecticPath, z: complex, interval=None, *, thorough: bool = False) -> int:
    """i_z(gamma) = index against gr(z I), |z| = 1."""
    if thorough:
        return index_vs_N(path, complex(z) * np.eye(path.space.dim), interval)
    pspace = product_space(path.space)
    return graph_index(path, circle_graph_frame(pspace, complex(z)), interval).index


@dataclass(frozen=True)
class PositivityReport:
    positive: bool
    margin: float
    hermitian_residual: float


def is_positive_path(path: SymplecticPath, interval=None, *,
                     grid_count: int = 17) -> PositivityReport:
    """Check -J d(gamma) gamma^{-1} > 0 on a grid; margin is the least eigenvalue."""
    a, b = interval if interval is not None else path.domain
    J = path.space.J
    margin = np.inf
    herm_res = 0.0
    for t in np.linspace(a, b, grid_count):
        q = -J @ path.velocity(t)
        herm_res = max(herm_res, la.opnorm(q - la.herm(q)) / max(1.0, la.opnorm(q)))
        w = np.linalg.eigvalsh(la.hermitian_part(q))
        margin = min(margin, float(w[0]))
    return PositivityReport(positive=bool(margin > 0 and herm_res < 1e-6),
                            margin=float(margin), hermitian_residual=herm_res)


def winding_pair(loop: SymplecticPath, *, samples: int = 64,
                 max_doublings: int = 12) -> tuple[int, int]:
    """Winding numbers of det U11, det U22 along a closed symplectic loop."""
    space = loop.space
    a, b = loop.domain
    if la.opnorm(loop.value(a) - loop.value(b)) > 1e-8 * max(1.0, la.opnorm(loop.value(a))):
        raise NotALoop("path endpoints differ")
    for _ in range(max_doublings):
        ts = np.linspace(a, b, samples + 1)
        factors = [polar_decompose(space, loop.value(t)) for t in ts]
        try:
            w_plus = det_phase_winding([f.U11 for f in factors], what="det U11")
            w_minus = det_phase_winding([f.U22 for f in factors], what="det U22")
            return w_plus, w_minus
        except Exception as exc:  # refine on phase-step overflow only
            from .errors import SubdivisionLimit

            if isinstance(exc, SubdivisionLimit):
                samples *= 2
                continue
            raise
    from .errors import SubdivisionLimit

    raise SubdivisionLimit("winding pair did not stabilise under sample doubling")
