"""Point distributions on the Bloch sphere.

Generators return a :class:`PointSet`, an ordered and labeled array of unit
vectors. Three families are provided: the spiral construction, the
box-grid construction of the original remote-preparation scheme, and the
vertices of the Platonic solids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .bloch import BlochVector
from .errors import EmptyPointSet, InvalidCount

DEDUP_TOL = 1e-9
SPIRAL_STEP = 3.6

SOLIDS = ("tetrahedron", "octahedron", "cube", "icosahedron", "dodecahedron")


@dataclass(frozen=True, eq=False)
class PointSet:
    """Labeled sequence of Bloch vectors backed by an (n, 3) array."""

    label: str
    points: np.ndarray

    def __post_init__(self):
        p = np.array(self.points, dtype=float).reshape(-1, 3)
        norms = np.linalg.norm(p, axis=1)
        if np.any(norms == 0.0) or not np.all(np.isfinite(norms)):
            raise ValueError("point sets may only hold non-zero finite vectors")
        # rows already unit to rounding are left bit-for-bit unchanged
        off = np.abs(norms - 1.0) > 1e-14
        p[off] /= norms[off, None]
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @classmethod
    def from_vectors(cls, label: str, vectors) -> "PointSet":
        return cls(label, np.array([v.as_array() for v in vectors]).reshape(-1, 3))

    def __len__(self) -> int:
        return self.points.shape[0]

    def __getitem__(self, i: int) -> BlochVector:
        return BlochVector.from_array(self.points[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.label == other.label and np.array_equal(self.points, other.points)

    __hash__ = None

    def with_point(self, v, label: str | None = None) -> "PointSet":
        """Copy of this set with one extra point appended."""
        extra = v.as_array() if isinstance(v, BlochVector) else np.asarray(v, dtype=float)
        return PointSet(label or self.label + "+1", np.vstack([self.points, extra]))

    def rotated(self, matrix) -> "PointSet":
        return PointSet(self.label + "@rot", self.points @ np.asarray(matrix).T)


def spiral_points(n: int) -> PointSet:
    """``n`` points on a spiral running from the south pole to the north pole.

    Heights are evenly spaced in ``z``; each step advances the azimuth so the
    arc travelled along the latitude is ``3.6 / sqrt(n)``. Both poles get
    azimuth 0.
    """
    if n < 2:
        raise InvalidCount(f"spiral_points needs n >= 2, got {n}")
    i = np.arange(n)
    z = -1.0 + 2.0 * i / (n - 1)
    z[0], z[-1] = -1.0, 1.0
    phi = np.zeros(n)
    step = SPIRAL_STEP / math.sqrt(n)
    for k in range(1, n - 1):
        phi[k] = math.fmod(phi[k - 1] + step / math.sqrt(1.0 - z[k] * z[k]), 2.0 * math.pi)
    sin_theta = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.column_stack([sin_theta * np.cos(phi), sin_theta * np.sin(phi), z])
    return PointSet(f"spiral(n={n})", pts)


def berry_grid_values(d: int) -> np.ndarray:
    """The ``d`` evenly spaced coordinates ``(2k - 1)/d - 1`` for k = 1..d."""
    k = np.arange(1, d + 1)
    return (2.0 * k - 1.0) / d - 1.0


def berry_grid(d: int, dedup: bool = True) -> PointSet:
    """Box-grid construction: each grid triple ``(a, b, c)`` is the state
    ``a|0> + (b + ic)|1>``.

    The all-zero triple (present for odd ``d``) is skipped. With ``dedup``
    set, triples on the same projective ray are merged.
    """
    if d < 1:
        raise InvalidCount(f"berry_grid needs d >= 1, got {d}")
    vals = berry_grid_values(d)
    a, b, c = (g.ravel() for g in np.meshgrid(vals, vals, vals, indexing="ij"))
    keep = (a != 0.0) | (b != 0.0) | (c != 0.0)
    a, b, c = a[keep], b[keep], c[keep]
    if a.size == 0:
        raise EmptyPointSet(f"berry_grid(d={d}) has no non-zero triple")
    norm2 = a * a + b * b + c * c
    pts = np.column_stack([2.0 * a * b, 2.0 * a * c, a * a - b * b - c * c]) / norm2[:, None]
    ps = PointSet(f"berry-grid(d={d})", pts)
    if dedup:
        ps = PointSet(f"berry-grid(d={d},dedup)", _greedy_merge(ps.points, DEDUP_TOL))
    return ps


def dedup(ps: PointSet, tol: float = DEDUP_TOL) -> PointSet:
    """Greedy merge in input order.

    A point is dropped iff it lies within angular distance ``tol`` of a point
    already kept. First occurrences keep their relative order.
    """
    if tol <= 0:
        raise ValueError("dedup tolerance must be positive")
    return PointSet(ps.label, _greedy_merge(ps.points, tol))


def _greedy_merge(pts: np.ndarray, tol: float) -> np.ndarray:
    if len(pts) == 0:
        return pts
    chord = 2.0 * math.sin(min(tol, math.pi) / 2.0)
    pairs = cKDTree(pts).query_pairs(chord * (1.0 + 1e-12) + 1e-15, output_type="ndarray")
    pairs = pairs.reshape(-1, 2)
    i, j = pairs.min(axis=1), pairs.max(axis=1)
    close = _angles(pts[i], pts[j]) <= tol
    i, j = i[close], j[close]
    order = np.lexsort((j, i))
    dropped = np.zeros(len(pts), dtype=bool)
    for a, b in zip(i[order].tolist(), j[order].tolist()):
        if not dropped[a]:
            dropped[b] = True
    return pts[~dropped]


def _angles(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    # atan2 form stays accurate for nearly parallel vectors
    return np.arctan2(np.linalg.norm(np.cross(u, v), axis=1), np.einsum("ij,ij->i", u, v))


def platonic(solid: str) -> PointSet:
    """Vertices of a Platonic solid on the unit sphere.

    Orientation: octahedron on the coordinate axes; cube and tetrahedron on
    the (+-1, +-1, +-1) diagonals; icosahedron on cyclic permutations of
    (0, +-1, +-g); dodecahedron on the cube plus cyclic permutations of
    (0, +-1/g, +-g), with g the golden ratio.
    """
    g = (1.0 + math.sqrt(5.0)) / 2.0
    signs = [(sa, sb) for sa in (1.0, -1.0) for sb in (1.0, -1.0)]
    cube = [(sx, sy, sz) for sx in (1.0, -1.0) for sy in (1.0, -1.0) for sz in (1.0, -1.0)]

    def cyclic(u: float, w: float):
        out = []
        for sa, sb in signs:
            t = (0.0, sa * u, sb * w)
            out += [t, (t[2], t[0], t[1]), (t[1], t[2], t[0])]
        return out

    if solid == "tetrahedron":
        pts = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    elif solid == "octahedron":
        pts = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    elif solid == "cube":
        pts = cube
    elif solid == "icosahedron":
        pts = cyclic(1.0, g)
    elif solid == "dodecahedron":
        pts = cube + cyclic(1.0 / g, g)
    else:
        raise ValueError(f"unknown solid {solid!r}; expected one of {', '.join(SOLIDS)}")
    return PointSet(f"platonic({solid})", np.array(pts, dtype=float))
