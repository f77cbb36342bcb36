"""Dual-side verification of the splitting and iteration identities.

Every verifier computes both sides of one identity with independent
machinery (winding indices vs. sums of winding indices, rank-computed
nullities vs. kernel dimensions) and reports an exact integer verdict.
Samplers produce seeded random instances, planting eigenvalues at the
relevant roots of unity often enough that the identities are exercised
away from the trivial 0 = 0 case.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .brake import BrakeSymmetry, cheb_power, kernel_dim, restricted_nullity, \
    split_nullity_brake, split_nullity_power, reflection_kernel_split
from .decompositions import positive_generator, random_sp_element, random_symplectic
from .errors import MaslovError
from .frames import graph_frame, product_space
from .iterate import a_iterate, brake_iterate, delta_k, reference_path
from .maslov import graph_index, is_positive_path, iz, nullities
from .paths import ConjugationPath, ConstantPath, ExpPath, PowerPath, ProductPath, \
    SymplecticPath
from .spaces import NormalizedSpace, SymplecticSpace, canonical_space


@dataclass
class VerdictReport:
    """Exact-match verdict for one identity instance."""

    identity: str
    lhs: int
    rhs_terms: list[int]
    match: bool
    seed: int | None = None
    dims: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    detail: dict = field(default_factory=dict)

    @property
    def rhs(self) -> int:
        return sum(self.rhs_terms)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "lhs": self.lhs,
            "rhs_terms": list(self.rhs_terms),
            "match": self.match,
            "seed": self.seed,
            "dims": dict(self.dims),
            "tolerances": dict(self.tolerances),
            **({"detail": self.detail} if self.detail else {}),
        }


def _verdict(identity, lhs, rhs_terms, seed=None, dims=None, **detail) -> VerdictReport:
    lhs = int(lhs)
    rhs_terms = [int(v) for v in rhs_terms]
    return VerdictReport(identity=identity, lhs=lhs, rhs_terms=rhs_terms,
                         match=(lhs == sum(rhs_terms)), seed=seed,
                         dims=dims or {}, detail=detail)


# -- samplers ---------------------------------------------------------------


def trial_seed(master_seed: int, trial: int) -> int:
    """Stable per-trial seed derivation."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def random_p_tau(space: SymplecticSpace, rng: np.random.Generator, *,
                 tau: float = 1.0, factors: int = 2,
                 scale: float = 0.9) -> SymplecticPath:
    """Random path in P_tau: product of exponentials, identity at t = 0."""
    parts = [ExpPath(space, random_sp_element(space, rng, scale=scale / factors),
                     domain=(0.0, tau)) for _ in range(factors)]
    path = parts[0]
    for p in parts[1:]:
        path = ProductPath(path, p)
    return path


def random_free_path(space: SymplecticSpace, rng: np.random.Generator, *,
                     scale: float = 0.9) -> SymplecticPath:
    """Random path not through the identity (general [a, b] instances)."""
    if isinstance(space, NormalizedSpace):
        m0 = random_symplectic(space, int(rng.integers(0, 2 ** 32)))
    else:
        nspace, T = space.normalized()
        m0 = np.linalg.solve(T, random_symplectic(nspace, int(rng.integers(0, 2 ** 32)))) @ T
    return ProductPath(ConstantPath(space, m0), random_p_tau(space, rng, scale=scale))


def random_positive_path(space: SymplecticSpace, rng: np.random.Generator, *,
                         tau: float = 1.0, scale: float = 0.7) -> SymplecticPath:
    """Random positive path (product of positive exponential factors)."""
    g1 = positive_generator(space, rng, scale=scale)
    g2 = positive_generator(space, rng, scale=scale)
    return ProductPath(ExpPath(space, g1, domain=(0.0, tau)),
                       ExpPath(space, g2, domain=(0.0, tau)))


def brake_conjugated(path: SymplecticPath, N) -> SymplecticPath:
    """gamma = N gamma_1^{-1} N gamma_1, the brake monodromy path."""
    return ProductPath(ConjugationPath(path, N), path)


def brake_involutive_matrix(brake: BrakeSymmetry, rng: np.random.Generator, *,
                            planted_angles: list[float] | None = None,
                            fixed_modes: int = 0) -> np.ndarray:
    """Random M with (NM)^2 = I, optional eigenvalues planted on the circle.

    Built per mode from commuting rotation/hyperbolic blocks in the
    K = I model, then conjugated to the brake's structure map.
    """
    n = brake.n
    angles = list(planted_angles or [])[:n]
    xs, bs, cs = [], [], []
    for a in angles:
        xs.append(np.cos(a)), bs.append(np.sin(a)), cs.append(-np.sin(a))
    for _ in range(fixed_modes):
        if len(xs) < n:
            xs.append(1.0), bs.append(0.0), cs.append(0.0)
    while len(xs) < n:
        if rng.random() < 0.5:
            a = rng.uniform(0.2, np.pi - 0.2)
            xs.append(np.cos(a)), bs.append(np.sin(a)), cs.append(-np.sin(a))
        else:
            t = rng.uniform(0.2, 1.2)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            xs.append(sign * np.cosh(t)), bs.append(np.sinh(t)), cs.append(np.sinh(t))
    o = np.linalg.qr(rng.standard_normal((n, n)))[0]
    X = o @ np.diag(xs) @ o.T
    B = o @ np.diag(bs) @ o.T
    C = o @ np.diag(cs) @ o.T
    m_std = np.block([[X, B], [C, X]]).astype(np.complex128)
    g1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u, s, vh = np.linalg.svd(g1 / np.sqrt(n))
    g1 = u @ np.diag(np.clip(s, 0.4, 2.5)) @ vh
    G = la.blockdiag(g1, np.linalg.inv(la.herm(g1)))
    m_std = G @ m_std @ np.linalg.inv(G)
    phi = la.blockdiag(np.linalg.inv(brake.K), np.eye(n))
    M = phi @ m_std @ np.linalg.inv(phi)
    return brake.require_brake_involutive(M)


# -- identity verifiers -----------------------------------------------------


def verify_bott_path(path: SymplecticPath, k: int, *, seed=None) -> VerdictReport:
    """i_1(gamma^k) = sum over k-th roots z of i_z(gamma) for a free path."""
    lhs = iz(PowerPath(path, k), 1.0)
    terms = [iz(path, np.exp(2j * np.pi * j / k)) for j in range(k)]
    return _verdict("bott-power", lhs, terms, seed=seed,
                    dims={"dim": path.space.dim, "k": k})


def verify_bott_iteration(path: SymplecticPath, k: int, A=None, *,
                          seed=None) -> VerdictReport:
    """A-iteration index identity plus its endpoint nullity splitting."""
    space = path.space
    A = np.eye(space.dim) if A is None else la.cmat(A)
    tilde = a_iterate(path, k, A)
    a_k = np.linalg.matrix_power(A, k)
    pspace = product_space(space)
    lhs = graph_index(tilde, graph_frame(pspace, a_k)).index
    terms = [graph_index(path, graph_frame(
        pspace, np.exp(2j * np.pi * j / k) * A)).index for j in range(k)]

    end = tilde.value(tilde.domain[1])
    nul_lhs, _ = nullities(space, end, graph_frame(pspace, a_k))
    nul_terms = []
    g_tau = path.value(path.domain[1])
    for j in range(k):
        z = np.exp(2j * np.pi * j / k)
        nul_terms.append(nullities(space, g_tau, graph_frame(pspace, z * A))[0])
    verdict = _verdict("bott-a-iteration", lhs, terms, seed=seed,
                       dims={"dim": space.dim, "k": k},
                       nullity_lhs=int(nul_lhs),
                       nullity_terms=[int(v) for v in nul_terms])
    verdict.match = verdict.match and (nul_lhs == sum(nul_terms))
    return verdict


def verify_delta_pathindependence(space: NormalizedSpace, seed: int, k: int = 2) -> VerdictReport:
    """delta_k agrees across distinct paths with the same endpoint."""
    rng = np.random.default_rng(seed)
    gamma = random_p_tau(space, rng)
    M = gamma.value(gamma.domain[1])
    d_direct = delta_k(space, M, k, path=gamma)
    d_reference = delta_k(space, M, k)
    loop = ProductPath(gamma, ExpPath(space, space.J, domain=(0.0, 1.0),
                                      rate=2 * np.pi))
    d_loop = delta_k(space, M, k, path=loop)
    match = d_direct == d_reference == d_loop
    return VerdictReport(identity="delta-k-well-defined", lhs=d_direct,
                         rhs_terms=[d_reference], match=match, seed=seed,
                         dims={"dim": space.dim, "k": k},
                         detail={"via_loop": d_loop})


def verify_brake2(brake: BrakeSymmetry, gamma1: SymplecticPath, S, *,
                  seed=None, use_iterate: bool = False) -> VerdictReport:
    """Two-times formula: i_S(N g^-1 N g) = i_{V+ x U+}(g) + i_{V- x U-}(g)."""
    space = brake.space
    v_plus, v_minus = brake.reflection_eigenframes(S)
    if use_iterate:
        gamma = brake_iterate(gamma1, 2, brake.N)
    else:
        gamma = brake_conjugated(gamma1, brake.N)
    pspace = brake.pspace
    lhs = graph_index(gamma, graph_frame(pspace, S)).index
    from .frames import product_lagrangian

    t1 = graph_index(gamma1, product_lagrangian(
        pspace, v_plus.columns, brake.plus_frame.columns)).index
    t2 = graph_index(gamma1, product_lagrangian(
        pspace, v_minus.columns, brake.minus_frame.columns)).index
    name = "brake-two-times" + ("-iterate" if use_iterate else "")
    return _verdict(name, lhs, [t1, t2], seed=seed,
                    dims={"dim": space.dim})


BRAKE_K_IDENTITIES = ("conjugated-split", "power-split", "odd-split",
                      "iterate-two", "iterate-even", "iterate-odd")


def verify_brake_k(brake: BrakeSymmetry, gamma1: SymplecticPath, k: int,
                   identity: str, *, seed=None) -> VerdictReport:
    """One of the brake iteration index identities, both sides."""
    upp = brake.product_frame("U+", "U+")
    upm = brake.product_frame("U+", "U-")
    gamma = brake_conjugated(gamma1, brake.N)

    if identity == "conjugated-split":
        lhs = graph_index(gamma, upp).index
        terms = [graph_index(gamma1, upp).index, graph_index(gamma1, upm).index]
    elif identity == "power-split":
        lhs = graph_index(PowerPath(gamma, k), upp).index
        terms = [graph_index(gamma, upp).index]
        terms += [iz(gamma, np.exp(1j * j * np.pi / k)) for j in range(1, k)]
    elif identity == "odd-split":
        combined = ProductPath(gamma1, PowerPath(gamma, k))
        lhs = graph_index(combined, upp).index
        terms = [graph_index(gamma1, upp).index]
        terms += [iz(gamma, np.exp(2j * np.pi * j / (2 * k + 1)))
                  for j in range(1, k + 1)]
    elif identity == "iterate-two":
        lhs = graph_index(brake_iterate(gamma1, 2, brake.N), upp).index
        terms = [graph_index(gamma1, upp).index, graph_index(gamma1, upm).index]
    elif identity == "iterate-even":
        # gamma has (N gamma(tau))^2 = I by construction; A-iterate it.
        tilde = a_iterate(gamma, k)
        lhs = graph_index(tilde, upp).index
        terms = [graph_index(gamma, upp).index]
        terms += [iz(gamma, np.exp(1j * j * np.pi / k)) for j in range(1, k)]
    elif identity == "iterate-odd":
        lhs = graph_index(brake_iterate(gamma1, 2 * k + 1, brake.N), upp).index
        two = brake_iterate(gamma1, 2, brake.N)
        terms = [graph_index(gamma1, upp).index]
        terms += [iz(two, np.exp(2j * np.pi * j / (2 * k + 1)))
                  for j in range(1, k + 1)]
    else:
        raise ValueError(f"unknown brake identity {identity!r}")
    return _verdict(f"brake-{identity}", lhs, terms, seed=seed,
                    dims={"dim": brake.space.dim, "k": k})


def verify_homotopy_shift(space: NormalizedSpace, seed: int, *,
                          s0: float = 0.35) -> VerdictReport:
    """Deformation bookkeeping: pushing gamma by e^{Js0} changes i_V by the
    difference of the endpoint positive sweeps."""
    rng = np.random.default_rng(seed)
    path = random_free_path(space, rng)
    pspace = product_space(space)
    V = graph_frame(pspace, space.require_symplectic(
        random_symplectic(space, seed + 17)))
    base = graph_index(path, V).index
    shift = ExpPath(space, space.J, domain=path.domain, rate=0.0, offset=s0)
    pushed = graph_index(ProductPath(shift, path), V).index

    def sweep(at: float) -> int:
        m = path.value(at)
        arc = ProductPath(ExpPath(space, space.J, domain=(0.0, s0)),
                          ConstantPath(space, m, domain=(0.0, s0)))
        return graph_index(arc, V).index

    lhs = pushed - base
    terms = [sweep(path.domain[1]), -sweep(path.domain[0])]
    return _verdict("homotopy-endpoint-sweep", lhs, terms, seed=seed,
                    dims={"dim": space.dim})


def verify_positivity(space: SymplecticSpace, seed: int, brake: BrakeSymmetry | None = None) -> VerdictReport:
    """Positive paths stay positive under products and brake conjugation."""
    rng = np.random.default_rng(seed)
    p1 = random_positive_path(space, rng)
    p2 = random_positive_path(space, rng)
    m_each = min(is_positive_path(p1).margin, is_positive_path(p2).margin)
    prod = is_positive_path(ProductPath(p1, p2))
    ok = m_each > 0 and prod.positive
    detail = {"product_margin": prod.margin, "factor_margin": m_each}
    if brake is not None:
        conj = is_positive_path(ConjugationPath(p1, brake.N))
        ok = ok and conj.positive
        detail["conjugated_margin"] = conj.margin
    return VerdictReport(identity="positivity-closure", lhs=int(ok),
                         rhs_terms=[1], match=bool(ok), seed=seed,
                         dims={"dim": space.dim}, detail=detail)


# -- campaign runner --------------------------------------------------------


SUITES = ("bott", "brake2", "brake-k", "nullity", "chebyshev", "convention", "all")


def run_trial(suite: str, seed: int, *, n_max: int = 3, k_max: int = 6) -> list[VerdictReport]:
    """One seeded instance of one suite; returns its verdicts."""
    rng = np.random.default_rng(seed)
    out: list[VerdictReport] = []
    if suite == "bott":
        n = int(rng.integers(1, n_max + 1))
        k = int(rng.integers(2, k_max + 1))
        space = canonical_space(n)
        out.append(verify_bott_path(random_free_path(space, rng), k, seed=seed))
        A = random_symplectic(space, seed + 1)
        out.append(verify_bott_iteration(random_p_tau(space, rng), k, A, seed=seed))
    elif suite == "brake2":
        n = int(rng.integers(1, min(n_max, 3) + 1))
        brake = BrakeSymmetry.random(n, seed)
        gamma1 = random_p_tau(brake.space, rng)
        S = brake.random_reflection(seed + 3)
        out.append(verify_brake2(brake, gamma1, S, seed=seed))
        out.append(verify_brake2(brake, gamma1, np.eye(2 * n), seed=seed))
    elif suite == "brake-k":
        n = int(rng.integers(1, min(n_max, 2) + 1))
        k = int(rng.integers(2, min(k_max, 5) + 1))
        brake = BrakeSymmetry.random(n, seed)
        gamma1 = random_p_tau(brake.space, rng, scale=0.8)
        ident = BRAKE_K_IDENTITIES[int(rng.integers(0, len(BRAKE_K_IDENTITIES)))]
        out.append(verify_brake_k(brake, gamma1, k, ident, seed=seed))
    elif suite == "nullity":
        n = int(rng.integers(1, n_max + 1))
        k = int(rng.integers(2, k_max + 1))
        brake = BrakeSymmetry.random(n, seed)
        space = brake.space
        angles = [np.pi * int(rng.integers(1, k)) / k] if rng.random() < 0.7 else []
        M = brake_involutive_matrix(brake, rng, planted_angles=angles,
                                    fixed_modes=int(rng.random() < 0.4))
        detail_m = split_nullity_brake(brake, M=M, k=k,
                                       alpha=angles[0] if angles else 0.7)
        P = space.require_symplectic(brake.random_symplectic(seed + 5))
        detail_p = split_nullity_brake(brake, P=P, k=k)
        nsp = canonical_space(n)
        G = random_symplectic(nsp, seed + 8)
        planted = G @ _planted_unitary(nsp, rng, k) @ np.linalg.inv(G)
        detail_pow = split_nullity_power(nsp, planted, k)
        ok = True  # the split_* helpers raise on violation
        out.append(VerdictReport(identity="nullity-splittings", lhs=int(ok),
                                 rhs_terms=[1], match=ok, seed=seed,
                                 dims={"dim": space.dim, "k": k},
                                 detail={"brake_M": detail_m, "brake_P": detail_p,
                                         "power": detail_pow}))
    elif suite == "chebyshev":
        n = int(rng.integers(1, n_max + 1))
        k = int(rng.integers(2, 13))
        brake = BrakeSymmetry.random(n, seed)
        M = brake_involutive_matrix(brake, rng)
        rep = cheb_power(brake, M, k)
        out.append(VerdictReport(identity="chebyshev-block-power", lhs=1,
                                 rhs_terms=[1], match=rep.relative_error <= 1e-8,
                                 seed=seed, dims={"dim": brake.space.dim, "k": k},
                                 detail={"relative_error": rep.relative_error}))
    elif suite == "convention":
        n = int(rng.integers(1, n_max + 1))
        space = canonical_space(n)
        out.append(verify_homotopy_shift(space, seed))
        brake = BrakeSymmetry.random(max(1, n - 1), seed)
        out.append(verify_positivity(brake.space, seed, brake))
        out.append(verify_delta_pathindependence(space, seed))
    elif suite == "all":
        for s in SUITES[:-1]:
            out.extend(run_trial(s, seed, n_max=n_max, k_max=k_max))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return out


def _planted_unitary(space: NormalizedSpace, rng: np.random.Generator, k: int) -> np.ndarray:
    """Block-diagonal unitary symplectic with eigenvalues planted at k-th roots."""
    n = space.n_plus
    phases = []
    for _ in range(2 * n):
        if rng.random() < 0.6:
            phases.append(np.exp(2j * np.pi * int(rng.integers(0, k)) / k))
        else:
            phases.append(np.exp(1j * rng.uniform(0, 2 * np.pi)))
    p, m = space.plus_basis, space.minus_basis
    u11 = np.diag(phases[:n])
    u22 = np.diag(phases[n:])
    return p @ u11 @ la.herm(p) + m @ u22 @ la.herm(m)
