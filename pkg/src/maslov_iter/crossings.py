"""Crossing forms and the signature-sum index oracle.

The crossing form of a differentiable Lagrangian path at t0, relative to
a direct complement mu', is q(x, y) = d/ds omega(x, y(s)) with y(s) in
lambda(s) and y(s) - y in mu'.  The value does not depend on the choice
of complement; tests exercise that.

`crossing_form_index` rebuilds the pair index purely from crossing data:
locate times where the Lagrangians meet, classify the relative form on
the intersection, and total the signatures with the same endpoint
convention as the winding method (m+ at interior crossings and at t=b,
-m- at interior crossings and at t=a).  It refuses degenerate or
unresolvable crossings; the winding method stays authoritative.
"""
from __future__ import annotations

import numpy as np

from . import linalg as la
from .errors import (
    DegenerateCrossing,
    DerivativeUnavailable,
    NonIsolatedCrossing,
    NotComplement,
)
from .maslov import (
    CONVENTION,
    CrossingRecord,
    IndexReport,
    LagrangianPath,
    SouriauPair,
)

SIGNATURE_TOL = 1e-6
CROSSING_TOL = 1e-7
SCAN_STEP_CAP = 0.08


def crossing_form(lam: LagrangianPath, t0: float, complement) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian crossing form of a Lagrangian path on lambda(t0).

    Returns (Q, basis): Q is expressed in the column basis of
    ``basis`` = lambda(t0)'s frame.  ``complement`` must span a direct
    complement of lambda(t0).
    """
    space = lam.space
    f0 = lam.frame(t0)
    fc = complement.columns if hasattr(complement, "columns") else la.cmat(complement)
    square = np.hstack([f0, fc])
    if square.shape[0] != square.shape[1]:
        raise NotComplement("complement has the wrong dimension")
    s = np.linalg.svd(square, compute_uv=False)
    if s[-1] <= 1e-10 * s[0]:
        raise NotComplement("subspaces do not span the whole space")
    try:
        df = lam.frame_derivative(t0)
    except NotImplementedError as exc:
        raise DerivativeUnavailable(str(exc)) from exc
    coords = np.linalg.solve(square, df)
    beta_dot = coords[f0.shape[1]:, :]
    q = space.omega_gram(f0, fc) @ beta_dot
    residual = la.opnorm(q - la.herm(q)) / max(1.0, la.opnorm(q))
    if residual > 1e-6:
        raise DerivativeUnavailable(
            f"crossing form not Hermitian (residual {residual:.3e}); derivative too rough"
        )
    return la.hermitian_part(q), f0


def form_on_vectors(space, lam: LagrangianPath, t0: float, complement,
                    vectors: np.ndarray) -> np.ndarray:
    """Evaluate the crossing form on given vectors inside lambda(t0)."""
    q, basis = crossing_form(lam, t0, complement)
    coords, *_ = np.linalg.lstsq(basis, vectors, rcond=None)
    return la.hermitian_part(la.herm(coords) @ q @ coords)


def relative_crossing_form(lam: LagrangianPath, mu: LagrangianPath, t0: float,
                           intersection: np.ndarray) -> np.ndarray:
    """q(lambda) - q(mu) restricted to a basis of lambda(t0) cap mu(t0)."""
    comp_l = _canonical_complement(lam, t0)
    comp_m = _canonical_complement(mu, t0)
    ql = form_on_vectors(lam.space, lam, t0, comp_l, intersection)
    qm = form_on_vectors(mu.space, mu, t0, comp_m, intersection)
    return ql - qm


def _canonical_complement(path: LagrangianPath, t0: float) -> np.ndarray:
    """J * lambda(t0) complements lambda(t0) when J^2 = -I; transfer otherwise."""
    nspace, transfer = path.space.normalized()
    f = path.frame(t0)
    comp_n = nspace.J @ (transfer @ f)
    return np.linalg.solve(transfer, comp_n)


# -- crossing location ----------------------------------------------------


def _golden_min(f, lo: float, hi: float, iters: int = 90) -> tuple[float, float]:
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = f(x2)
        if hi - lo < 1e-14 * max(1.0, abs(hi) + abs(lo)):
            break
    return ((x1, f1) if f1 < f2 else (x2, f2))


def _scan_times(pair: SouriauPair, a: float, b: float) -> list[float]:
    """Times where the Lagrangians intersect, refined to ~1e-12."""
    def min_angle(t: float) -> float:
        return float(np.min(np.abs(pair.intersection_angles(t))))

    ts = [a, b]
    # refine until neighbouring relative unitaries are close
    while True:
        new = []
        for t0, t1 in zip(ts, ts[1:]):
            w0 = pair.relative_unitary(t0)
            w1 = pair.relative_unitary(t1)
            if la.opnorm(w1 @ la.herm(w0) - np.eye(w0.shape[0])) > SCAN_STEP_CAP:
                new.append(0.5 * (t0 + t1))
        if not new:
            break
        ts = sorted(set(ts) | set(new))
        if len(ts) > 20000:
            raise NonIsolatedCrossing("crossing scan did not stabilise")

    vals = [min_angle(t) for t in ts]
    hits: list[float] = []
    span = b - a
    for i, t in enumerate(ts):
        left = vals[i - 1] if i > 0 else np.inf
        right = vals[i + 1] if i + 1 < len(ts) else np.inf
        if vals[i] > min(0.2, left, right):
            continue
        lo = ts[i - 1] if i > 0 else a
        hi = ts[i + 1] if i + 1 < len(ts) else b
        t_star, f_star = _golden_min(min_angle, lo, hi)
        if f_star < CROSSING_TOL:
            hits.append(min(max(t_star, a), b))
        elif f_star < 1e-4:
            raise NonIsolatedCrossing(
                f"near-crossing at t={t_star:.6g} (angle {f_star:.2e}) cannot be classified"
            )
    # endpoints count whenever the pair meets there
    for t_end in (a, b):
        if min_angle(t_end) < CROSSING_TOL:
            hits.append(t_end)
    hits = sorted(hits)
    merged: list[float] = []
    for t in hits:
        if merged and abs(t - merged[-1]) < 1e-9 * max(1.0, span):
            continue
        if merged and abs(t - merged[-1]) < 1e-6 * max(1.0, span):
            raise NonIsolatedCrossing(f"crossings at {merged[-1]} and {t} too close")
        merged.append(t)
    return merged


def _intersection_basis_at(pair: SouriauPair, t: float, m: int) -> np.ndarray:
    fl = la.orthonormal_columns(pair.lam.frame(t))
    fm = la.orthonormal_columns(pair.mu.frame(t))
    _, s, vh = np.linalg.svd(np.hstack([fl, -fm]))
    small = s[-m:] if m else np.array([])
    if m and np.max(small) > 1e-5:
        raise NonIsolatedCrossing(f"intersection basis unresolved (s={small})")
    ns = la.herm(vh)[:, len(s) - m:]
    vecs = fl @ ns[: fl.shape[1], :]
    return la.orthonormal_columns(vecs)


def crossing_form_index(lam: LagrangianPath, mu: LagrangianPath,
                        interval=None) -> IndexReport:
    """Index by summed crossing signatures; the cross-validation oracle."""
    pair = SouriauPair(lam, mu)
    a, b = interval if interval is not None else pair.domain
    a, b = float(a), float(b)
    records: list[CrossingRecord] = []
    total = 0
    for t0 in _scan_times(pair, a, b):
        angles = np.abs(pair.intersection_angles(t0))
        m = int(np.count_nonzero(angles < 1e-6))
        if np.any((angles >= 1e-6) & (angles < 1e-4)):
            raise NonIsolatedCrossing(f"unresolved nullity at t={t0:.6g}")
        basis = _intersection_basis_at(pair, t0, m)
        q = relative_crossing_form(lam, mu, t0, basis)
        w = np.linalg.eigvalsh(q)
        scale = max(1.0, la.opnorm(q))
        m_plus = int(np.count_nonzero(w > SIGNATURE_TOL * scale))
        m_minus = int(np.count_nonzero(w < -SIGNATURE_TOL * scale))
        m_zero = m - m_plus - m_minus
        if m_zero > 0:
            raise DegenerateCrossing(
                f"crossing at t={t0:.6g} has {m_zero}-dimensional kernel"
            )
        at_start = abs(t0 - a) < 1e-9 * max(1.0, b - a)
        at_end = abs(t0 - b) < 1e-9 * max(1.0, b - a)
        if at_start:
            contribution = -m_minus
        elif at_end:
            contribution = m_plus
        else:
            contribution = m_plus - m_minus
        total += contribution
        records.append(CrossingRecord(time=float(t0), frame=basis, form=q,
                                      signature=(m_plus, m_zero, m_minus),
                                      contribution=contribution))
    return IndexReport(index=total, method="crossing-form", crossings=records,
                       convention=CONVENTION)
