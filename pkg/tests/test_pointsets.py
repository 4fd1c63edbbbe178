import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rspcover.errors import EmptyPointSet, InvalidCount
from rspcover.pointsets import (
    SOLIDS,
    PointSet,
    berry_grid,
    berry_grid_values,
    dedup,
    platonic,
    spiral_points,
)
from rspcover.voronoi import covering_radius_sampled


def projective_classes(d: int) -> int:
    """Distinct states among the grid triples, by exact rational arithmetic.

    a|0> + (b+ic)|1> and a'|0> + (b'+ic')|1> are the same ray iff the 2x2
    determinant of their amplitude vectors vanishes.
    """
    vals = [Fraction(2 * k - 1, d) - 1 for k in range(1, d + 1)]
    reps = []
    for a, b, c in itertools.product(vals, repeat=3):
        if a == b == c == 0:
            continue
        u0, u1 = (a, Fraction(0)), (b, c)
        same = False
        for v0, v1 in reps:
            # u0 * v1 - u1 * v0 with complex numbers as (re, im) Fraction pairs
            re = u0[0] * v1[0] - u0[1] * v1[1] - (u1[0] * v0[0] - u1[1] * v0[1])
            im = u0[0] * v1[1] + u0[1] * v1[0] - (u1[0] * v0[1] + u1[1] * v0[0])
            if re == 0 and im == 0:
                same = True
                break
        if not same:
            reps.append((u0, u1))
    return len(reps)


class TestSpiral:
    def test_two_points_are_the_poles(self):
        assert spiral_points(2).points.tolist() == [[0.0, 0.0, -1.0], [0.0, 0.0, 1.0]]

    def test_three_points_middle(self):
        phi = 3.6 / math.sqrt(3.0)
        expected = (math.cos(phi), math.sin(phi), 0.0)
        assert spiral_points(3).points[1] == pytest.approx(expected, abs=1e-15)
        assert spiral_points(3).points[1] == pytest.approx((-0.4860, 0.8740, 0.0), abs=2e-4)

    def test_recurrence(self):
        n = 50
        ps = spiral_points(n)
        z = ps.points[:, 2]
        phi = np.arctan2(ps.points[:, 1], ps.points[:, 0]) % (2 * math.pi)
        for i in range(1, n - 1):
            step = (phi[i] - phi[i - 1]) % (2 * math.pi)
            want = (3.6 / math.sqrt(n) / math.sqrt(1 - z[i] ** 2)) % (2 * math.pi)
            assert step == pytest.approx(want, abs=1e-9)

    @pytest.mark.parametrize("n", [2, 3, 7, 64, 1000])
    def test_heights_are_arithmetic(self, n):
        z = spiral_points(n).points[:, 2]
        assert z == pytest.approx(-1 + 2 * np.arange(n) / (n - 1), abs=1e-15)
        assert np.all(np.diff(z) > 0)
        assert z[0] == -1.0 and z[-1] == 1.0

    def test_deterministic(self):
        assert spiral_points(300).points.tobytes() == spiral_points(300).points.tobytes()

    @pytest.mark.parametrize("n", [-1, 0, 1])
    def test_invalid_count(self, n):
        with pytest.raises(InvalidCount):
            spiral_points(n)


class TestBerryGrid:
    def test_values(self):
        assert berry_grid_values(4).tolist() == [-0.75, -0.25, 0.25, 0.75]

    def test_fig1_count(self):
        assert len(berry_grid(4, dedup=True)) == 28

    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_dedup_matches_exact_rays(self, d):
        assert len(berry_grid(d, dedup=True)) == projective_classes(d)

    def test_d2_has_four_points(self):
        assert projective_classes(2) == 4
        assert len(berry_grid(2, dedup=True)) == 4

    @pytest.mark.parametrize("d", range(1, 9))
    def test_raw_count(self, d):
        if d == 1:
            with pytest.raises(EmptyPointSet):
                berry_grid(1, dedup=False)
        else:
            assert len(berry_grid(d, dedup=False)) == d ** 3 - d % 2

    def test_raw_grid_dedup_to_28(self):
        assert len(dedup(berry_grid(4, dedup=False), 1e-9)) == 28

    def test_unit_norm(self):
        p = berry_grid(7, dedup=False).points
        assert np.abs(np.linalg.norm(p, axis=1) - 1).max() <= 1e-12


class TestDedup:
    def test_duplicate_dropped(self):
        ps = PointSet("t", [[0, 0, 1], [0, 0, 1]])
        assert dedup(ps, 1e-9).points.tolist() == [[0.0, 0.0, 1.0]]

    def test_antipodes_kept(self):
        ps = PointSet("t", [[0, 0, 1], [0, 0, -1]])
        assert len(dedup(ps, 3.0)) == 2

    def test_greedy_order(self):
        # b is within tol of a, c within tol of b but not of a: greedy keeps a and c
        t = 0.01
        pts = [[1, 0, 0], [math.cos(0.8 * t), math.sin(0.8 * t), 0], [math.cos(1.6 * t), math.sin(1.6 * t), 0]]
        out = dedup(PointSet("t", pts), t)
        assert np.allclose(out.points, np.array(pts)[[0, 2]])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.floats(1e-6, 0.5))
    def test_idempotent(self, seed, tol):
        rng = np.random.default_rng(seed)
        ps = PointSet("r", rng.normal(size=(40, 3)))
        once = dedup(ps, tol)
        assert np.array_equal(dedup(once, tol).points, once.points)


class TestPlatonic:
    @pytest.mark.parametrize("solid, count", list(zip(SOLIDS, [4, 6, 8, 12, 20])))
    def test_counts_and_norms(self, solid, count):
        p = platonic(solid).points
        assert len(p) == count
        assert np.abs(np.linalg.norm(p, axis=1) - 1).max() <= 1e-12

    def test_octahedron_dots(self):
        p = platonic("octahedron").points
        g = p @ p.T
        off = g[~np.eye(6, dtype=bool)]
        assert set(np.round(off, 12).tolist()) == {0.0, -1.0}

    def test_tetrahedron_dots(self):
        p = platonic("tetrahedron").points
        g = p @ p.T
        assert g[~np.eye(4, dtype=bool)] == pytest.approx(-1 / 3, abs=1e-12)

    def test_cube_covering_radius_by_sampling(self):
        want = (1 - 1 / math.sqrt(3)) / 2
        got = covering_radius_sampled(platonic("cube"), 500_000, 3).rho_f
        assert want - 5e-3 <= got <= want + 1e-12

    @pytest.mark.parametrize("solid", SOLIDS)
    def test_symmetric_under_cyclic_permutation(self, solid):
        p = platonic(solid).points
        assert same_set(p[:, [1, 2, 0]], p)

    @pytest.mark.parametrize("solid", ["octahedron", "cube", "icosahedron", "dodecahedron"])
    def test_symmetric_under_half_turn_about_x(self, solid):
        p = platonic(solid).points
        assert same_set(p * np.array([1, -1, -1]), p)

    def test_octahedron_quarter_turn(self):
        p = platonic("octahedron").points
        quarter = np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]], dtype=float)
        assert same_set(p @ quarter.T, p)

    def test_unknown(self):
        with pytest.raises(ValueError):
            platonic("torus")


def same_set(a: np.ndarray, b: np.ndarray, tol=1e-9) -> bool:
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return len(a) == len(b) and bool(np.all(d.min(axis=1) <= tol)) and bool(np.all(d.min(axis=0) <= tol))
