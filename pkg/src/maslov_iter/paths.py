"""Symplectic path expression trees.

A path is a lazily-validated map t -> M(t) into the symplectic group,
built from a small node algebra (constants, exponentials, products,
concatenation, reversal, N gamma^{-1} N conjugation, pointwise powers,
scalar twists, sampled data).  Exponential/product/conjugation trees
carry exact derivatives; sampled paths fall back to symmetric finite
differences with step h = (b - a) * 1e-5.

Trees serialize to JSON with a ``type`` tag per node; matrices are
row-major nested arrays of [re, im] pairs.
"""
from __future__ import annotations

import numpy as np

from . import linalg as la
from .errors import ConfigError, DerivativeUnavailable, DiscontinuousJunction
from .spaces import SymplecticSpace


def matrix_to_json(m) -> list:
    m = la.cmat(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad matrix payload: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ConfigError("matrix payload must be rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


class SymplecticPath:
    """Base node: domain, cached evaluation, derivative."""

    exact_derivative = True

    def __init__(self, space: SymplecticSpace, domain: tuple[float, float]):
        a, b = float(domain[0]), float(domain[1])
        if not b > a:
            raise ConfigError(f"empty path domain [{a}, {b}]")
        self.space = space
        self.domain = (a, b)
        self._cache: dict[float, np.ndarray] = {}

    # subclasses implement _value / _derivative
    def _value(self, t: float) -> np.ndarray:
        raise NotImplementedError

    def _derivative(self, t: float) -> np.ndarray:
        raise DerivativeUnavailable(type(self).__name__)

    def value(self, t: float) -> np.ndarray:
        t = float(t)
        out = self._cache.get(t)
        if out is None:
            out = self.space.require_symplectic(self._value(t), what=f"path({t:g})")
            if len(self._cache) > 4096:
                self._cache.clear()
            self._cache[t] = out
        return out

    def derivative(self, t: float) -> np.ndarray:
        if self.exact_derivative:
            return self._derivative(float(t))
        a, b = self.domain
        h = (b - a) * 1e-5
        lo, hi = max(a, t - h), min(b, t + h)
        return (self._value(hi) - self._value(lo)) / (hi - lo)

    def velocity(self, t: float) -> np.ndarray:
        """Right-logarithmic derivative d(gamma) gamma^{-1} at t."""
        return self.derivative(t) @ np.linalg.inv(self.value(t))

    def grid(self, count: int) -> np.ndarray:
        a, b = self.domain
        return np.linspace(a, b, count)

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}(domain={self.domain})"


class ConstantPath(SymplecticPath):
    def __init__(self, space, M, domain=(0.0, 1.0)):
        super().__init__(space, domain)
        self.M = la.frozen(space.require_symplectic(M))

    def _value(self, t):
        return self.M

    def _derivative(self, t):
        return np.zeros_like(self.M)

    def to_dict(self):
        return {"type": "constant", "matrix": matrix_to_json(self.M),
                "domain": list(self.domain)}


class ExpPath(SymplecticPath):
    """t -> exp((rate * t + offset) * G) for a Lie-algebra generator G."""

    def __init__(self, space, generator, domain=(0.0, 1.0), rate=1.0, offset=0.0):
        super().__init__(space, domain)
        self.generator = la.frozen(space.require_sp(generator))
        self.rate = float(rate)
        self.offset = float(offset)

    def _scale(self, t):
        return self.rate * t + self.offset

    def _value(self, t):
        return la.matrix_exp(self._scale(t) * self.generator)

    def _derivative(self, t):
        return self.rate * self.generator @ self.value(t)

    def to_dict(self):
        return {"type": "exp", "generator": matrix_to_json(self.generator),
                "rate": self.rate, "offset": self.offset, "domain": list(self.domain)}


class ProductPath(SymplecticPath):
    def __init__(self, left: SymplecticPath, right: SymplecticPath):
        left.space.require_same(right.space)
        if left.domain != right.domain:
            raise ConfigError("product factors must share a domain")
        super().__init__(left.space, left.domain)
        self.left, self.right = left, right
        self.exact_derivative = left.exact_derivative and right.exact_derivative

    def _value(self, t):
        return self.left.value(t) @ self.right.value(t)

    def _derivative(self, t):
        return (self.left.derivative(t) @ self.right.value(t)
                + self.left.value(t) @ self.right.derivative(t))

    def to_dict(self):
        return {"type": "product", "left": self.left.to_dict(),
                "right": self.right.to_dict()}


class ConcatPath(SymplecticPath):
    """First path on [a, c], second on [c, b]; values must agree at c."""

    def __init__(self, first: SymplecticPath, second: SymplecticPath):
        first.space.require_same(second.space)
        junction = first.domain[1]
        if abs(second.domain[0] - junction) > 1e-12:
            raise ConfigError("concat domains must abut")
        mismatch = la.opnorm(first.value(junction) - second.value(junction))
        if mismatch > 1e-9 * max(1.0, la.opnorm(first.value(junction))):
            raise DiscontinuousJunction(f"junction mismatch {mismatch:.3e} at t={junction}")
        super().__init__(first.space, (first.domain[0], second.domain[1]))
        self.first, self.second, self.junction = first, second, junction
        self.exact_derivative = first.exact_derivative and second.exact_derivative

    def _piece(self, t):
        return self.first if t < self.junction else self.second

    def _value(self, t):
        return self._piece(t).value(t)

    def _derivative(self, t):
        return self._piece(t).derivative(t)

    def to_dict(self):
        return {"type": "concat", "first": self.first.to_dict(),
                "second": self.second.to_dict(), "junction": self.junction}


class ReversePath(SymplecticPath):
    def __init__(self, inner: SymplecticPath):
        super().__init__(inner.space, inner.domain)
        self.inner = inner
        self.exact_derivative = inner.exact_derivative

    def _mirror(self, t):
        a, b = self.domain
        return a + b - t

    def _value(self, t):
        return self.inner.value(self._mirror(t))

    def _derivative(self, t):
        return -self.inner.derivative(self._mirror(t))

    def to_dict(self):
        return {"type": "reverse", "inner": self.inner.to_dict()}


class ConjugationPath(SymplecticPath):
    """t -> N gamma(t)^{-1} N for a fixed matrix N."""

    def __init__(self, inner: SymplecticPath, N):
        super().__init__(inner.space, inner.domain)
        self.inner = inner
        self.N = la.frozen(la.cmat(N))
        self.exact_derivative = inner.exact_derivative

    def _value(self, t):
        return self.N @ np.linalg.inv(self.inner.value(t)) @ self.N

    def _derivative(self, t):
        inv = np.linalg.inv(self.inner.value(t))
        return -self.N @ inv @ self.inner.derivative(t) @ inv @ self.N

    def to_dict(self):
        return {"type": "conjugation", "inner": self.inner.to_dict(),
                "matrix": matrix_to_json(self.N)}


class PowerPath(SymplecticPath):
    """Pointwise power t -> gamma(t)^k."""

    def __init__(self, inner: SymplecticPath, k: int):
        if k < 1:
            raise ConfigError("power exponent must be >= 1")
        super().__init__(inner.space, inner.domain)
        self.inner, self.k = inner, int(k)
        self.exact_derivative = inner.exact_derivative

    def _value(self, t):
        return np.linalg.matrix_power(self.inner.value(t), self.k)

    def _derivative(self, t):
        m = self.inner.value(t)
        dm = self.inner.derivative(t)
        total = np.zeros_like(m)
        for j in range(self.k):
            total += (np.linalg.matrix_power(m, j) @ dm
                      @ np.linalg.matrix_power(m, self.k - 1 - j))
        return total

    def to_dict(self):
        return {"type": "power", "inner": self.inner.to_dict(), "k": self.k}


class ScaledPath(SymplecticPath):
    """t -> z * gamma(t) for a unit-modulus scalar z."""

    def __init__(self, inner: SymplecticPath, z: complex):
        if abs(abs(z) - 1.0) > 1e-12:
            raise ConfigError("scalar twist must have |z| = 1")
        super().__init__(inner.space, inner.domain)
        self.inner, self.z = inner, complex(z)
        self.exact_derivative = inner.exact_derivative

    def _value(self, t):
        return self.z * self.inner.value(t)

    def _derivative(self, t):
        return self.z * self.inner.derivative(t)

    def to_dict(self):
        return {"type": "scaled", "inner": self.inner.to_dict(),
                "z": [self.z.real, self.z.imag]}


class ReparamPath(SymplecticPath):
    """gamma(alpha * s + beta) over a new domain (affine reparametrization)."""

    def __init__(self, inner: SymplecticPath, domain, alpha, beta):
        super().__init__(inner.space, domain)
        self.inner = inner
        self.alpha, self.beta = float(alpha), float(beta)
        self.exact_derivative = inner.exact_derivative

    def _inner_t(self, t):
        a, b = self.inner.domain
        return min(max(self.alpha * t + self.beta, a), b)

    def _value(self, t):
        return self.inner.value(self._inner_t(t))

    def _derivative(self, t):
        return self.alpha * self.inner.derivative(self._inner_t(t))

    def to_dict(self):
        return {"type": "reparam", "inner": self.inner.to_dict(),
                "domain": list(self.domain), "alpha": self.alpha, "beta": self.beta}


class SampledPath(SymplecticPath):
    """Path through sample matrices, interpolated in the group.

    With ``chart=True`` each gap is bridged by M_i exp(s log(M_i^{-1}
    M_{i+1})), which stays symplectic; plain linear interpolation is kept
    for callers that sample densely enough to sit inside the validation
    tolerance.  Derivatives are finite differences either way.
    """

    exact_derivative = False

    def __init__(self, space, times, matrices, *, chart: bool = True):
        times = np.asarray(times, dtype=float)
        if times.ndim != 1 or len(times) < 2 or np.any(np.diff(times) <= 0):
            raise ConfigError("sample times must be strictly increasing, >= 2 points")
        super().__init__(space, (float(times[0]), float(times[-1])))
        self.times = times
        self.matrices = [la.frozen(space.require_symplectic(m)) for m in matrices]
        if len(self.matrices) != len(times):
            raise ConfigError("one matrix per sample time required")
        self.chart = bool(chart)
        self._logs: list[np.ndarray] | None = None

    def _gap_logs(self):
        if self._logs is None:
            self._logs = [
                la.matrix_log(np.linalg.solve(self.matrices[i], self.matrices[i + 1]))
                for i in range(len(self.matrices) - 1)
            ]
        return self._logs

    def _value(self, t):
        i = int(np.searchsorted(self.times, t, side="right") - 1)
        i = min(max(i, 0), len(self.times) - 2)
        t0, t1 = self.times[i], self.times[i + 1]
        s = (t - t0) / (t1 - t0)
        if self.chart:
            return self.matrices[i] @ la.matrix_exp(s * self._gap_logs()[i])
        return (1 - s) * self.matrices[i] + s * self.matrices[i + 1]

    def to_dict(self):
        return {"type": "sampled", "times": [float(t) for t in self.times],
                "matrices": [matrix_to_json(m) for m in self.matrices],
                "chart": self.chart}


_NODE_BUILDERS: dict[str, callable] = {}


def register_node(tag: str, builder) -> None:
    _NODE_BUILDERS[tag] = builder


def path_from_dict(space: SymplecticSpace, obj: dict) -> SymplecticPath:
    """Rebuild a path tree from its JSON form."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError("path node must be an object with a 'type' tag")
    tag = obj["type"]
    try:
        if tag == "constant":
            return ConstantPath(space, matrix_from_json(obj["matrix"]),
                                tuple(obj.get("domain", (0.0, 1.0))))
        if tag == "exp":
            return ExpPath(space, matrix_from_json(obj["generator"]),
                           tuple(obj.get("domain", (0.0, 1.0))),
                           rate=obj.get("rate", 1.0), offset=obj.get("offset", 0.0))
        if tag == "product":
            return ProductPath(path_from_dict(space, obj["left"]),
                               path_from_dict(space, obj["right"]))
        if tag == "concat":
            return ConcatPath(path_from_dict(space, obj["first"]),
                              path_from_dict(space, obj["second"]))
        if tag == "reverse":
            return ReversePath(path_from_dict(space, obj["inner"]))
        if tag == "conjugation":
            return ConjugationPath(path_from_dict(space, obj["inner"]),
                                   matrix_from_json(obj["matrix"]))
        if tag == "power":
            return PowerPath(path_from_dict(space, obj["inner"]), int(obj["k"]))
        if tag == "scaled":
            z = obj["z"]
            return ScaledPath(path_from_dict(space, obj["inner"]),
                              complex(z[0], z[1]))
        if tag == "reparam":
            return ReparamPath(path_from_dict(space, obj["inner"]),
                               tuple(obj["domain"]), obj["alpha"], obj["beta"])
        if tag == "sampled":
            return SampledPath(space, obj["times"],
                               [matrix_from_json(m) for m in obj["matrices"]],
                               chart=obj.get("chart", True))
        if tag in _NODE_BUILDERS:
            return _NODE_BUILDERS[tag](space, obj)
    except KeyError as exc:
        raise ConfigError(f"path node '{tag}' missing field {exc}") from exc
    raise ConfigError(f"unknown path node type '{tag}'")
