"""Gauge-point winding counts for paths of unitary matrices.

The index engine reduces a pair of Lagrangian paths to a path of
relative unitaries W(t) and counts signed passes of eigenvalues through
a gauge point placed just counterclockwise of 1, at angle +eps.  A pass
in the clockwise (angle-decreasing) direction counts +1; this is the
calibration in which the model positive pair path accrues +nullity per
crossing, attributed to the arrival side, so crossings in (a, b] count
for positive paths.

The count is certified: adaptive bisection keeps the per-step spectral
motion small enough for unambiguous cyclic pairing of eigenangles, and
the total is recomputed at gauge eps/2 and must agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg as la
from .errors import GaugeUnstable, NotALoop, SubdivisionLimit

# An endpoint eigenangle below CROSSING_ANGLE_TOL is treated as an
# endpoint crossing; above it, the gauge is kept below half the angle.
CROSSING_ANGLE_TOL = 1e-7
GAUGE_FLOOR = 4.0 * CROSSING_ANGLE_TOL
GAUGE_DEFAULT = 1e-3
STEP_NORM_CAP = 0.5          # ||W2 W1* - I|| per refined step
MOTION_CAP = 1.35            # max per-eigenvalue arc motion accepted in pairing
MAX_DEPTH = 40


@dataclass
class WindingCount:
    """Certified signed eigenvalue flux through the gauge point."""

    index: int
    gauge_eps: float
    depth: int
    samples: list[tuple[float, np.ndarray]] = field(repr=False, default_factory=list)

    def trace(self) -> tuple[np.ndarray, np.ndarray]:
        """(times, sorted eigenangle matrix) of the refinement samples."""
        ts = np.array([t for t, _ in self.samples])
        angs = np.vstack([np.sort(a) for _, a in self.samples])
        return ts, angs


def _angles(w_eigs: np.ndarray) -> np.ndarray:
    return np.angle(w_eigs / np.abs(w_eigs))


class _SampleSet:
    """Refinement samples of W(t): time -> (W, eigenangles)."""

    def __init__(self, wfun: Callable[[float], np.ndarray]):
        self._wfun = wfun
        self._data: dict[float, tuple[np.ndarray, np.ndarray]] = {}

    def at(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        got = self._data.get(t)
        if got is None:
            w = self._wfun(t)
            got = (w, _angles(np.linalg.eigvals(w)))
            self._data[t] = got
        return got


def _refine(samples: _SampleSet, a: float, b: float, max_depth: int) -> tuple[list[float], int]:
    """Bisect until every step satisfies the operator-norm motion cap.

    Starts from a seeded grid and, once converged, force-splits every
    step and re-checks: a step whose endpoints happen to almost agree
    while W loops in between is caught at the midpoint.
    """
    depth = 0

    def cap_pass(ts: list[float]) -> list[float]:
        nonlocal depth
        while True:
            new_ts = []
            for t0, t1 in zip(ts, ts[1:]):
                w0, _ = samples.at(t0)
                w1, _ = samples.at(t1)
                if la.opnorm(w1 @ la.herm(w0) - np.eye(w0.shape[0])) > STEP_NORM_CAP:
                    new_ts.append(0.5 * (t0 + t1))
            if not new_ts:
                return ts
            depth += 1
            if depth > max_depth:
                raise SubdivisionLimit(f"no convergence after {max_depth} bisections")
            ts = sorted(set(ts) | set(new_ts))

    ts = cap_pass([float(t) for t in np.linspace(a, b, 17)])
    mids = [0.5 * (t0 + t1) for t0, t1 in zip(ts, ts[1:])]
    return cap_pass(sorted(set(ts) | set(mids))), depth


def _split_step(ts: list[float], i: int, samples: _SampleSet) -> None:
    mid = 0.5 * (ts[i] + ts[i + 1])
    if mid in (ts[i], ts[i + 1]):
        raise SubdivisionLimit("step too small to bisect further")
    samples.at(mid)
    ts.insert(i + 1, mid)


def _pick_gauge(target: float, all_angles: np.ndarray) -> float:
    """Move the gauge inside [0.8, 1.25] * target, away from sampled angles."""
    lo, hi = 0.8 * target, 1.25 * target
    nearby = np.sort(all_angles[(all_angles > lo - 0.1 * target)
                                & (all_angles < hi + 0.1 * target)])
    if nearby.size == 0:
        return target
    grid = np.concatenate([[lo], nearby[(nearby >= lo) & (nearby <= hi)], [hi]])
    gaps = np.diff(grid)
    j = int(np.argmax(gaps))
    cand = 0.5 * (grid[j] + grid[j + 1])
    if np.min(np.abs(all_angles - cand)) < 1e-13:
        raise GaugeUnstable("cannot separate the gauge from sampled eigenangles")
    return float(cand)


def _step_flux(rel0: np.ndarray, rel1: np.ndarray, delta_angle: float) -> int | None:
    """Net downward gauge passes over one step, or None if ambiguous.

    ``rel`` angles live in (0, 2pi) measured counterclockwise from the
    gauge.  Eigenvalues are paired in cyclic order with an unknown shift;
    each unit of shift is one eigenvalue wrapping past the gauge cut.
    Downward (clockwise) passes count +1.

    The accepted per-eigenvalue motion shrinks with the endpoint distance
    of the step (``delta_angle``), so impostor pairings that rotate the
    whole sorted spectrum by one notch die out under refinement.
    """
    n = len(rel0)
    cap = min(MOTION_CAP, max(4.0 * delta_angle, 1e-4))
    r0, r1 = np.sort(rel0), np.sort(rel1)
    candidates = []
    for shift in range(-n, n + 1):
        idx = (np.arange(n) + shift) % n
        wrap = (np.arange(n) + shift) // n
        motion = r1[idx] + 2 * np.pi * wrap - r0
        if np.max(np.abs(motion)) < cap:
            candidates.append((float(np.sum(np.abs(motion))), -int(np.sum(wrap))))
    if not candidates:
        return None
    fluxes = {flux for _, flux in candidates}
    if len(fluxes) > 1:
        return None
    return candidates[0][1]


def _total_flux(ts: list[float], samples: _SampleSet, gauge: float,
                max_depth: int) -> int:
    total = 0
    i = 0
    splits = 0
    while i < len(ts) - 1:
        w0, a0 = samples.at(ts[i])
        w1, a1 = samples.at(ts[i + 1])
        delta = la.opnorm(w1 @ la.herm(w0) - np.eye(w0.shape[0]))
        delta_angle = 2.0 * np.arcsin(min(1.0, 0.5 * delta))
        rel0 = np.mod(a0 - gauge, 2 * np.pi)
        rel1 = np.mod(a1 - gauge, 2 * np.pi)
        flux = _step_flux(rel0, rel1, delta_angle)
        if flux is None:
            splits += 1
            if splits > 2 ** min(max_depth, 16):
                raise SubdivisionLimit("pairing never became unambiguous")
            _split_step(ts, i, samples)
            continue
        total += flux
        i += 1
    return total


def gauge_winding(wfun: Callable[[float], np.ndarray], a: float, b: float,
                  *, max_depth: int = MAX_DEPTH,
                  collect_trace: bool = False) -> WindingCount:
    """Signed eigenvalue flux of W(t) through the gauge point over [a, b]."""
    samples = _SampleSet(wfun)
    ts, depth = _refine(samples, a, b, max_depth)

    # Gauge below half the smallest nonzero endpoint eigenangle, capped at 1e-3.
    end_angles = np.abs(np.concatenate([samples.at(a)[1], samples.at(b)[1]]))
    nonzero = end_angles[end_angles > CROSSING_ANGLE_TOL]
    eps_max = GAUGE_DEFAULT if nonzero.size == 0 else \
        min(GAUGE_DEFAULT, 0.5 * float(np.min(nonzero)))
    if eps_max < GAUGE_FLOOR:
        raise GaugeUnstable(
            f"endpoint eigenangle {2 * eps_max:.3e} too close to a crossing to certify"
        )

    for attempt in range(3):
        all_angles = np.concatenate([samples.at(t)[1] for t in ts]) % (2 * np.pi)
        gauge = _pick_gauge(eps_max, all_angles)
        count = _total_flux(ts, samples, gauge, max_depth)
        gauge_half = _pick_gauge(max(eps_max / 2.0, 2.0 * CROSSING_ANGLE_TOL),
                                 np.concatenate([samples.at(t)[1] for t in ts]) % (2 * np.pi))
        count_half = _total_flux(ts, samples, gauge_half, max_depth)
        if count == count_half:
            out = WindingCount(index=count, gauge_eps=gauge, depth=depth)
            if collect_trace:
                out.samples = [(t, samples.at(t)[1]) for t in ts]
            return out
        # Disagreement: refine globally once and retry.
        for t0, t1 in list(zip(ts, ts[1:])):
            mid = 0.5 * (t0 + t1)
            samples.at(mid)
            ts.append(mid)
        ts = sorted(set(ts))
        depth += 1
    raise GaugeUnstable("winding count not stable under gauge halving")


# -- determinant winding of loops ----------------------------------------


def det_phase_winding(values: list[np.ndarray], *, what: str = "loop") -> int:
    """Winding number of det along a sampled loop via phase accumulation."""
    dets = np.array([np.linalg.det(v) for v in values])
    if np.any(np.abs(dets) < 1e-12):
        raise NotALoop(f"{what}: determinant vanished along the loop")
    steps = np.angle(dets[1:] / dets[:-1])
    if np.any(np.abs(steps) > np.pi / 2):
        raise SubdivisionLimit(f"{what}: phase step exceeded pi/2; sample finer")
    total = float(np.sum(steps))
    winding = total / (2 * np.pi)
    nearest = round(winding)
    if abs(winding - nearest) > 1e-6:
        raise NotALoop(f"{what}: accumulated phase {total:.6f} is not a full turn count")
    return int(nearest)
