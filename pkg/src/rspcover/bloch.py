"""Bloch-sphere primitives for pure qubits.

Convention: ``cos(t/2)|0> + exp(i p) sin(t/2)|1>`` maps to
``(sin t cos p, sin t sin p, cos t)``, so ``|0>`` sits at the north pole.
Fidelity between pure states is ``(1 + u.v) / 2`` in Bloch coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Shared tolerances.
EPS_GEO = 1e-9
EPS_NORM = 1e-12
# Inputs further than this from unit norm are rejected rather than rescaled.
_NORM_REJECT = 1e-6


@dataclass(frozen=True)
class BlochVector:
    """Unit vector in R^3 for a pure qubit. Renormalized on construction."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if not math.isfinite(n) or abs(n - 1.0) > _NORM_REJECT:
            raise ValueError(f"Bloch vector must be unit length, got norm {n!r}")
        object.__setattr__(self, "x", float(self.x) / n)
        object.__setattr__(self, "y", float(self.y) / n)
        object.__setattr__(self, "z", float(self.z) / n)

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "BlochVector":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_array(cls, a) -> "BlochVector":
        return cls(float(a[0]), float(a[1]), float(a[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __neg__(self) -> "BlochVector":
        return BlochVector(-self.x, -self.y, -self.z)

    def dot(self, other: "BlochVector") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z


NORTH = BlochVector(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class QubitState:
    """Pure qubit ``psi0|0> + (psi1_re + i psi1_im)|1>`` in canonical phase.

    ``psi0`` is real and non-negative. When ``psi0`` is zero the state is
    exactly ``|1>``.
    """

    psi0: float
    psi1_re: float
    psi1_im: float

    def __post_init__(self):
        a0 = complex(self.psi0)
        a1 = complex(self.psi1_re, self.psi1_im)
        n = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        if not math.isfinite(n) or abs(n - 1.0) > _NORM_REJECT:
            raise ValueError(f"qubit state must be normalized, got norm {n!r}")
        p0, p1 = _canonical(a0 / n, a1 / n)
        object.__setattr__(self, "psi0", p0)
        object.__setattr__(self, "psi1_re", p1.real)
        object.__setattr__(self, "psi1_im", p1.imag)

    @classmethod
    def from_amplitudes(cls, a0: complex, a1: complex) -> "QubitState":
        """Build from arbitrary (possibly unnormalized) complex amplitudes."""
        n = math.sqrt(abs(a0) ** 2 + abs(a1) ** 2)
        if n == 0.0:
            raise ValueError("zero vector is not a state")
        p0, p1 = _canonical(complex(a0) / n, complex(a1) / n)
        return cls(p0, p1.real, p1.imag)

    @property
    def psi1(self) -> complex:
        return complex(self.psi1_re, self.psi1_im)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.psi0, self.psi1], dtype=complex)


def _canonical(a0: complex, a1: complex) -> tuple[float, complex]:
    r0 = abs(a0)
    if r0 == 0.0:
        return 0.0, complex(1.0, 0.0)
    phase = a0 / r0
    return r0, a1 / phase


@dataclass(frozen=True)
class SchmidtPair:
    """Schmidt coefficients of the shared state ``sum_k alpha_k |kk>``."""

    alpha0: float
    alpha1: float

    def __post_init__(self):
        if not (self.alpha0 > 0 and self.alpha1 > 0):
            raise ValueError("Schmidt coefficients must be positive")
        if abs(self.alpha0 ** 2 + self.alpha1 ** 2 - 1.0) > EPS_NORM:
            raise ValueError("Schmidt coefficients must satisfy a0^2 + a1^2 = 1")

    @classmethod
    def from_r_squared(cls, r2: float) -> "SchmidtPair":
        if not 0.0 < r2 <= 0.5:
            raise ValueError("r^2 must lie in (0, 0.5]")
        return cls(math.sqrt(1.0 - r2), math.sqrt(r2))

    @property
    def r(self) -> float:
        return min(self.alpha0, self.alpha1)

    @property
    def rf(self) -> float:
        """Infidelity radius of the cap preparable with this resource."""
        return self.r ** 2


@dataclass(frozen=True)
class SphericalCap:
    center: BlochVector
    rf: float

    def __post_init__(self):
        if not 0.0 <= self.rf <= 1.0:
            raise ValueError("cap radius rf must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class BlochRotation:
    """Proper rotation of the Bloch sphere, stored as a read-only 3x3 matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float).reshape(3, 3)
        if not np.allclose(m @ m.T, np.eye(3), atol=1e-10) or abs(np.linalg.det(m) - 1.0) > 1e-10:
            raise ValueError("matrix is not a proper rotation")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "BlochRotation":
        return cls(np.eye(3))

    @classmethod
    def about_axis(cls, axis, angle: float) -> "BlochRotation":
        k = np.asarray(axis, dtype=float)
        k = k / np.linalg.norm(k)
        K = _skew(k)
        return cls(np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K))

    def inverse(self) -> "BlochRotation":
        return BlochRotation(self.matrix.T)

    def __matmul__(self, other: "BlochRotation") -> "BlochRotation":
        return BlochRotation(self.matrix @ other.matrix)

    def __eq__(self, other):
        if not isinstance(other, BlochRotation):
            return NotImplemented
        return bool(np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash(self.matrix.tobytes())


def _skew(k: np.ndarray) -> np.ndarray:
    return np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])


def state_to_bloch(s: QubitState) -> BlochVector:
    p1 = s.psi1
    return BlochVector(
        2.0 * s.psi0 * p1.real,
        2.0 * s.psi0 * p1.imag,
        s.psi0 * s.psi0 - abs(p1) ** 2,
    )


def bloch_to_state(v: BlochVector) -> QubitState:
    psi0, re, im = bloch_to_amplitudes(v.as_array()[None, :])[:, 0]
    return QubitState(psi0, re, im)


def fidelity(u: BlochVector, v: BlochVector) -> float:
    """``|<u|v>|^2`` for the pure states with Bloch vectors ``u`` and ``v``."""
    f = 0.5 * (1.0 + u.dot(v))
    return min(1.0, max(0.0, f))


def infidelity(u: BlochVector, v: BlochVector) -> float:
    return 1.0 - fidelity(u, v)


def state_fidelity(a: QubitState, b: QubitState) -> float:
    """Squared overlap computed from amplitudes, independent of the Bloch map."""
    return abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2


def cap_contains(c: SphericalCap, e: BlochVector) -> bool:
    return fidelity(c.center, e) >= 1.0 - c.rf - EPS_NORM


def rotation_taking(src: BlochVector, dst: BlochVector) -> BlochRotation:
    """Rotation about ``src x dst`` by the angle between them.

    Antipodal inputs rotate by pi about the component of x (or y, if x is
    parallel to ``src``) orthogonal to ``src``.
    """
    return BlochRotation(rotation_matrices(src.as_array()[None, :], dst.as_array()[None, :])[0])


def apply_rotation(R: BlochRotation, v: BlochVector) -> BlochVector:
    return BlochVector.normalized(*(R.matrix @ v.as_array()))


# Vectorized kernels shared by the scalar API and the batch simulators.

def bloch_from_amplitudes(psi0: np.ndarray, psi1: np.ndarray) -> np.ndarray:
    """Bloch vectors, shape (n, 3), from real psi0 and complex psi1 arrays."""
    psi0 = np.asarray(psi0, dtype=float)
    psi1 = np.asarray(psi1, dtype=complex)
    return np.stack(
        [2.0 * psi0 * psi1.real, 2.0 * psi0 * psi1.imag, psi0 * psi0 - np.abs(psi1) ** 2],
        axis=-1,
    )


def bloch_to_amplitudes(v: np.ndarray) -> np.ndarray:
    """Canonical amplitudes ``(psi0, Re psi1, Im psi1)``, shape (3, n)."""
    v = np.asarray(v, dtype=float)
    x, y, z = v[:, 0], v[:, 1], np.clip(v[:, 2], -1.0, 1.0)
    rho = np.hypot(x, y)
    upper = z >= 0.0
    # take the larger amplitude from z and the smaller one from rho, so
    # neither is lost to cancellation near a pole
    big = np.sqrt(0.5 * (1.0 + np.abs(z)))
    small = rho / (2.0 * big)
    psi0 = np.where(upper, big, small)
    mod1 = np.where(upper, small, big)
    safe = rho > 0.0
    c = np.where(safe, x / np.where(safe, rho, 1.0), 1.0)
    sn = np.where(safe, y / np.where(safe, rho, 1.0), 0.0)
    # exactly |1> at the south pole, per the canonical form
    south = psi0 == 0.0
    return np.stack([psi0, np.where(south, 1.0, mod1 * c), np.where(south, 0.0, mod1 * sn)])


def rotation_matrices(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Batch of rotations taking each ``src[k]`` to ``dst[k]``; shape (n, 3, 3)."""
    src = np.asarray(src, dtype=float)
    dst = np.broadcast_to(np.asarray(dst, dtype=float), src.shape)
    n = src.shape[0]
    c = np.einsum("ij,ij->i", src, dst)
    w = np.cross(src, dst)
    K = np.zeros((n, 3, 3))
    K[:, 0, 1], K[:, 0, 2] = -w[:, 2], w[:, 1]
    K[:, 1, 0], K[:, 1, 2] = w[:, 2], -w[:, 0]
    K[:, 2, 0], K[:, 2, 1] = -w[:, 1], w[:, 0]
    s2 = np.einsum("ij,ij->i", w, w)
    anti = (c <= -1.0 + EPS_NORM) | ((c < 0.0) & (s2 == 0.0))
    # K^2 / (1 + c) == K^2 (1 - c) / |w|^2; the second form avoids cancellation for c < 0
    upper = c >= 0.0
    scale = np.ones(n)
    scale[upper] = 1.0 / (1.0 + c[upper])
    lower = ~upper & ~anti
    scale[lower] = (1.0 - c[lower]) / s2[lower]
    R = np.eye(3)[None, :, :] + K + (K @ K) * scale[:, None, None]
    for k in np.flatnonzero(anti):
        R[k] = _half_turn_perpendicular(src[k])
    return R


def _half_turn_perpendicular(a: np.ndarray) -> np.ndarray:
    for ref in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])):
        p = ref - np.dot(ref, a) * a
        norm = np.linalg.norm(p)
        if norm > 1e-6:
            k = p / norm
            return 2.0 * np.outer(k, k) - np.eye(3)
    raise AssertionError("unreachable: x and y cannot both be parallel to a unit vector")
