"""Spherical Voronoi diagrams and the fidelity covering radius.

The Delaunay triangulation of points on the unit sphere is their 3-d convex
hull; the outward unit normal of each hull facet is the Voronoi vertex shared
by the facet's sites. The covering radius of a site set is the largest
infidelity between any point of the sphere and its nearest site, attained at
one of those vertices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .bloch import EPS_GEO, BlochVector
from .errors import DegenerateInput, EmptyPointSet
from .pointsets import PointSet
from .sampling import SAMPLE_CHUNK, sample_sphere

# Lattice size for sets without a 3-d hull.
FALLBACK_SAMPLES = 10**7
_BRUTE_FORCE_SITES = 64


@dataclass(frozen=True, eq=False)
class VoronoiDiagram:
    """Voronoi vertices with generator site indices, plus per-site cells.

    ``vertices`` is (V, 3), sorted by (z, y, x). ``cells[i]`` lists the
    vertex indices around site ``i`` counter-clockwise seen from outside.
    ``merged`` records whether cocircular facets were fused into one vertex.
    """

    sites: PointSet
    vertices: np.ndarray
    generators: tuple
    triangles: np.ndarray
    merged: bool

    @cached_property
    def cells(self) -> tuple:
        return _cells(self.sites.points, self.vertices, self.generators)

    @property
    def n_facets(self) -> int:
        return len(self.triangles)

    @property
    def delaunay_edges(self) -> set:
        e = set()
        for a, b, c in self.triangles.tolist():
            e.update({tuple(sorted((a, b))), tuple(sorted((b, c))), tuple(sorted((a, c)))})
        return e


@dataclass(frozen=True)
class CoveringResult:
    rho_f: float
    witness_vertex: BlochVector
    witness_site: int
    method: str  # "exact" or "sampled"

    def as_dict(self) -> dict:
        w = self.witness_vertex
        return {
            "rho_f": self.rho_f,
            "method": self.method,
            "witness_site": self.witness_site,
            "witness_vertex": [w.x, w.y, w.z],
        }


def _check_spans_space(points: np.ndarray) -> None:
    if len(points) < 4:
        raise DegenerateInput(f"need at least 4 sites for a hull, got {len(points)}")
    centered = points - points.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[-1] <= 1e-9 * max(sv[0], 1e-300):
        raise DegenerateInput("sites are coplanar; no 3-d hull exists")


def _facet_normals(pts: np.ndarray):
    """Hull triangles and their outward unit normals; drops zero-area slivers.

    Returns ``(triangles, normals, all_kept)``.
    """
    _check_spans_space(pts)
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"convex hull failed: {exc}") from exc
    tri = np.sort(hull.simplices, axis=1)
    a, b, c = pts[tri[:, 0]], pts[tri[:, 1]], pts[tri[:, 2]]
    normals = np.cross(b - a, c - a)
    lengths = np.linalg.norm(normals, axis=1)
    # qhull triangulates merged facets; slivers carry no direction of their own
    good = lengths > 1e-14 * np.maximum(1.0, np.linalg.norm(b - a, axis=1))
    tri, normals, lengths = tri[good], normals[good], lengths[good]
    normals /= lengths[:, None]
    flip = np.einsum("ij,ij->i", normals, hull.equations[good, :3]) < 0.0
    normals[flip] *= -1.0
    return tri, normals, bool(good.all())


def voronoi(ps: PointSet) -> VoronoiDiagram:
    """Spherical Voronoi diagram via the convex hull of the sites.

    Raises :class:`DegenerateInput` when the sites do not bound a solid.
    """
    pts = ps.points
    tri, normals, no_slivers = _facet_normals(pts)

    # Fuse coincident circumcenters (cocircular sites) with union-find.
    roots = np.arange(len(normals))
    pairs = cKDTree(normals).query_pairs(EPS_GEO, output_type="ndarray")
    if len(pairs):
        parent = roots.copy()

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in pairs.tolist():
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
        roots = np.array([find(i) for i in range(len(normals))])
    uniq = np.unique(roots)
    merged = len(uniq) < len(normals) or not no_slivers

    groups = {r: set() for r in uniq.tolist()}
    for k, r in enumerate(roots.tolist()):
        groups[r].update(tri[k].tolist())
    verts = normals[uniq]

    # Generators also include any site tied with the nearest one.
    tree = cKDTree(pts)
    d0, _ = tree.query(verts)
    near = tree.query_ball_point(verts, d0 + EPS_GEO)
    gens = [sorted(groups[r].union(extra)) for r, extra in zip(uniq.tolist(), near)]

    order = np.lexsort((verts[:, 0], verts[:, 1], verts[:, 2]))
    verts = verts[order]
    gens = tuple(tuple(gens[k]) for k in order.tolist())
    verts.setflags(write=False)
    return VoronoiDiagram(
        sites=ps,
        vertices=verts,
        generators=gens,
        triangles=tri,
        merged=merged,
    )


def _cells(pts: np.ndarray, verts: np.ndarray, gens) -> tuple:
    site = np.fromiter((g for gs in gens for g in gs), dtype=np.intp)
    vert = np.repeat(np.arange(len(gens)), [len(gs) for gs in gens])
    e1 = _perpendicular(pts)
    e2 = np.cross(pts, e1)
    v = verts[vert]
    ang = np.arctan2(np.einsum("ij,ij->i", v, e2[site]), np.einsum("ij,ij->i", v, e1[site]))
    order = np.lexsort((ang, site))
    bounds = np.searchsorted(site[order], np.arange(len(pts) + 1))
    ordered = vert[order].tolist()
    return tuple(tuple(ordered[bounds[k]:bounds[k + 1]]) for k in range(len(pts)))


def _perpendicular(u: np.ndarray) -> np.ndarray:
    """Unit vectors orthogonal to each row of ``u`` (or to a single vector)."""
    u2 = np.atleast_2d(u)
    ref = np.zeros_like(u2)
    use_x = np.abs(u2[:, 0]) < 0.9
    ref[use_x, 0] = 1.0
    ref[~use_x, 1] = 1.0
    p = ref - np.einsum("ij,ij->i", ref, u2)[:, None] * u2
    p /= np.linalg.norm(p, axis=1)[:, None]
    return p if u.ndim == 2 else p[0]


def nearest_sites(sites: np.ndarray, queries: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index of the nearest site for each query and the matching dot product."""
    if len(sites) <= _BRUTE_FORCE_SITES:
        idx = np.empty(len(queries), dtype=np.intp)
        dots = np.empty(len(queries))
        for lo in range(0, len(queries), SAMPLE_CHUNK):
            sim = queries[lo:lo + SAMPLE_CHUNK] @ sites.T
            k = np.argmax(sim, axis=1)
            idx[lo:lo + SAMPLE_CHUNK] = k
            dots[lo:lo + SAMPLE_CHUNK] = sim[np.arange(len(k)), k]
        return idx, dots
    _, idx = cKDTree(sites).query(queries)
    return idx, np.einsum("ij,ij->i", queries, sites[idx])


def _infidelity(dots: np.ndarray) -> np.ndarray:
    return 1.0 - np.clip(0.5 * (1.0 + dots), 0.0, 1.0)


def _result(points: np.ndarray, cand: np.ndarray, method: str) -> CoveringResult:
    idx, dots = nearest_sites(points, cand)
    inf = _infidelity(dots)
    k = int(np.argmax(inf))
    return CoveringResult(float(inf[k]), BlochVector.normalized(*cand[k]), int(idx[k]), method)


def covering_radius(ps: PointSet, fallback_samples: int = FALLBACK_SAMPLES) -> CoveringResult:
    """Largest infidelity from any point of the sphere to its nearest site.

    Solid configurations are evaluated at their Voronoi vertices. Sets with
    fewer than four sites or no 3-d hull go through :func:`_degenerate_cover`.
    """
    if len(ps) == 0:
        raise EmptyPointSet("covering radius of an empty point set")
    try:
        _, normals, _ = _facet_normals(ps.points)
    except DegenerateInput:
        return _degenerate_cover(ps.points, fallback_samples)
    # Unmerged facet normals are the Voronoi vertices, possibly repeated.
    return _result(ps.points, normals, "exact")


def _fibonacci_lattice(m: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
    hi = m if hi is None else hi
    k = np.arange(lo, hi, dtype=float)
    z = 1.0 - (2.0 * k + 1.0) / m
    phi = k * (math.pi * (3.0 - math.sqrt(5.0)))
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def _degenerate_cover(points: np.ndarray, samples: int) -> CoveringResult:
    """Covering radius for sets without a solid hull.

    The maximum of the nearest-site distance sits at a point equidistant from
    the active sites; for flat or tiny sets these are the plane normals, the
    antipodes of pair midpoints, or the antipodes of single sites. Those
    candidates are evaluated directly, and a dense lattice with local
    refinement guards against any configuration they miss.
    """
    cands = [-points]
    # normals of the best-fit plane and of the best-fit plane through the origin
    for m in (points - points.mean(axis=0), points):
        vt = np.linalg.svd(m, full_matrices=True)[2]
        cands.append(np.vstack([vt[-1], -vt[-1], vt[-2], -vt[-2]]))
    if len(points) <= 256:
        i, j = np.triu_indices(len(points), 1)
        mids = points[i] + points[j]
        norms = np.linalg.norm(mids, axis=1)
        keep = norms > 1e-12
        cands.append(-mids[keep] / norms[keep, None])
    mean = points.mean(axis=0)
    if np.linalg.norm(mean) > 1e-12:
        cands.append(-mean[None, :] / np.linalg.norm(mean))
    cand = np.vstack(cands)
    cand /= np.linalg.norm(cand, axis=1)[:, None]
    best = _result(points, cand, "exact")

    top = []
    for lo in range(0, samples, SAMPLE_CHUNK * 8):
        lat = _fibonacci_lattice(samples, lo, min(samples, lo + SAMPLE_CHUNK * 8))
        _, dots = nearest_sites(points, lat)
        inf = _infidelity(dots)
        k = np.argpartition(-inf, 3)[:4] if len(inf) > 4 else np.arange(len(inf))
        top.extend((float(inf[q]), lat[q]) for q in k)
    top.sort(key=lambda t: -t[0])
    spacing = math.sqrt(4.0 * math.pi / max(samples, 1))
    for _, x0 in top[:8]:
        x = _refine(points, x0, spacing)
        r = _result(points, x[None, :], "exact")
        if r.rho_f > best.rho_f + 1e-15:
            best = r
    return best


def _refine(points: np.ndarray, x0: np.ndarray, scale: float) -> np.ndarray:
    e1 = _perpendicular(x0)
    e2 = np.cross(x0, e1)

    def lift(t):
        v = x0 + t[0] * e1 + t[1] * e2
        return v / np.linalg.norm(v)

    def neg_gap(t):
        return -(1.0 - 0.5 * (1.0 + np.max(points @ lift(t))))

    res = minimize(
        neg_gap,
        np.zeros(2),
        method="Nelder-Mead",
        options={
            "initial_simplex": np.array([[0.0, 0.0], [scale, 0.0], [0.0, scale]]),
            "xatol": 1e-13,
            "fatol": 1e-16,
            "maxiter": 2000,
        },
    )
    return lift(res.x)


def covering_radius_sampled(ps: PointSet, samples: int, seed: int) -> CoveringResult:
    """Monte Carlo lower bound on the covering radius.

    Nearest sites are found by direct scan, so nothing is shared with the
    hull construction.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if len(ps) == 0:
        raise EmptyPointSet("covering radius of an empty point set")
    pts = ps.points
    best_inf, best_x, best_site = -1.0, None, -1
    for lo in range(0, samples, SAMPLE_CHUNK):
        hi = min(samples, lo + SAMPLE_CHUNK)
        x = sample_sphere(seed, lo, hi)
        sim = x @ pts.T
        k = np.argmax(sim, axis=1)
        inf = _infidelity(sim[np.arange(len(k)), k])
        q = int(np.argmax(inf))
        if inf[q] > best_inf:
            best_inf, best_x, best_site = float(inf[q]), x[q], int(k[q])
    return CoveringResult(best_inf, BlochVector.normalized(*best_x), best_site, "sampled")


def is_cover(ps: PointSet, rf: float) -> bool:
    """Whether caps of infidelity radius ``rf`` around every site cover the sphere."""
    if not 0.0 <= rf <= 1.0:
        raise ValueError("rf must lie in [0, 1]")
    return covering_radius(ps).rho_f <= rf + 1e-12
