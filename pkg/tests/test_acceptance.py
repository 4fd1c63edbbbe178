"""Acceptance suite. Each test prints one ``PASS``/``FAIL`` line (run with ``-s``
or read the captured output) and then asserts."""
import contextlib
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from rspcover.bloch import EPS_GEO
from rspcover.pointsets import SOLIDS, PointSet, berry_grid, platonic, spiral_points
from rspcover.protocol import simulate
from rspcover.tradeoff import (
    area_lower_bound,
    baseline_table,
    build_table,
    ebits,
    r2_grid,
    tradeoff_curve,
)
from rspcover.voronoi import covering_radius, covering_radius_sampled, voronoi

TABLE = {
    8: 0.259739,
    16: 0.120679,
    32: 0.054644,
    64: 0.026443,
    128: 0.013054,
    256: 0.006607,
    512: 0.003326,
    1024: 0.001669,
}


@pytest.fixture
def verdict(capsys):
    """Yields a callable ``check(name)`` context manager that reports the outcome."""

    @contextlib.contextmanager
    def check(name):
        try:
            yield
        except BaseException as exc:
            with capsys.disabled():
                print(f"\n{name}: FAIL ({type(exc).__name__}: {exc})")
            raise
        with capsys.disabled():
            print(f"\n{name}: PASS")

    return check


def angles(v, pts):
    return np.arctan2(np.linalg.norm(np.cross(pts, v), axis=1), pts @ v)


def test_ac01_table(verdict):
    with verdict("AC1 table reproduction"):
        t0 = time.perf_counter()
        got = {n: covering_radius(spiral_points(n)).rho_f for n in (2, 4, *TABLE)}
        elapsed = time.perf_counter() - t0
        for n, want in TABLE.items():
            assert abs(got[n] - want) <= 1e-4, (n, got[n], want)
        assert abs(got[2] - 0.5) <= 1e-6 and abs(got[4] - 0.5) <= 1e-6
        # the full 2..1024 table, in the same time budget
        t0 = time.perf_counter()
        build_table("spiral", 2, 1024)
        full = time.perf_counter() - t0
        assert full <= 60.0, f"full table took {full:.1f}s"
        assert elapsed <= 60.0


def test_ac02_grid_count(verdict):
    with verdict("AC2 box-grid point count"):
        assert len(berry_grid(4, dedup=True)) == 28


def test_ac03_oracle(verdict):
    with verdict("AC3 exact versus sampled"):
        rng = np.random.default_rng(20240601)
        for k in range(20):
            n = int(rng.integers(4, 101))
            ps = PointSet(f"rand{k}", rng.normal(size=(n, 3)))
            exact = covering_radius(ps).rho_f
            sampled = covering_radius_sampled(ps, 2_000_000, k).rho_f
            assert sampled <= exact, (k, n, sampled, exact)
            assert exact - sampled <= 2e-3, (k, n, sampled, exact)


def test_ac04_voronoi_invariants(verdict):
    with verdict("AC4 Voronoi invariants"):
        sets = [spiral_points(n) for n in (8, 64, 256)] + [platonic(s) for s in SOLIDS]
        for ps in sets:
            d = voronoi(ps)
            sites = ps.points
            for v, gens in zip(d.vertices, d.generators):
                assert len(gens) >= 3
                a = angles(v, sites)
                g = a[list(gens)]
                assert g.max() - g.min() <= EPS_GEO, ps.label
                others = np.delete(a, list(gens))
                assert others.min() >= g.max() - EPS_GEO, ps.label
            if not d.merged:
                assert len(d.vertices) == 2 * len(ps) - 4, ps.label
            assert d.n_facets == 2 * len(ps) - 4


def test_ac05_duals(verdict):
    with verdict("AC5 Platonic closed forms"):
        assert abs(covering_radius(platonic("tetrahedron")).rho_f - 1 / 3) <= 1e-9
        want = (1 - 1 / math.sqrt(3)) / 2
        assert abs(covering_radius(platonic("octahedron")).rho_f - want) <= 1e-9
        assert abs(covering_radius(platonic("cube")).rho_f - want) <= 1e-9


def test_ac06_monotonicity(verdict):
    with verdict("AC6 insertion monotonicity"):
        for k in range(100):
            rng = np.random.default_rng([7, k])
            ps = PointSet(f"m{k}", rng.normal(size=(int(rng.integers(4, 60)), 3)))
            before = covering_radius(ps).rho_f
            after = covering_radius(ps.with_point(rng.normal(size=3))).rho_f
            assert after <= before + 1e-12, (k, before, after)


@pytest.fixture(scope="module")
def tables():
    return build_table("spiral", 2, 1024), baseline_table(0.0025)


def test_ac07_area_bound(verdict, tables):
    with verdict("AC7 area bound"):
        grid = r2_grid(0.0025, 0.5, 200)
        for t in tables:
            for e in t.entries:
                assert e.rho_f >= 1 / e.n, (t.label, e)
            for p in tradeoff_curve(t, grid):
                assert p.cbits_step3 >= area_lower_bound(p.r_squared), p


def test_ac08_dominance(verdict, tables):
    with verdict("AC8 spiral dominates the box grid"):
        spiral, grid_t = tables
        grid = r2_grid(0.0025, 0.5, 200)
        s, b = tradeoff_curve(spiral, grid), tradeoff_curve(grid_t, grid)
        assert not s.uncovered and not b.uncovered
        gaps = [y.cbits_step3 - x.cbits_step3 for x, y in zip(s, b)]
        assert min(gaps) >= 0.0
        assert max(gaps) > 0.0


def test_ac09_protocol(verdict):
    with verdict("AC9 protocol exactness"):
        t0 = time.perf_counter()
        for n in (16, 64, 256):
            r = simulate(spiral_points(n), 100_000, n)
            assert r.all_within_cap, r
            assert r.reconstruction_max_error <= 1e-9, r
        elapsed = time.perf_counter() - t0
        assert elapsed <= 30.0, f"{elapsed:.1f}s"


def test_ac10_entropy(verdict):
    with verdict("AC10 entropy"):
        assert abs(ebits(0.5) - 1.0) <= 1e-12
        assert abs(ebits(0.25) - 0.811278) <= 1e-6
        v = [ebits(r) for r in np.linspace(1e-6, 0.5, 1000)]
        assert all(a < b for a, b in zip(v, v[1:]))


def _cli(*args):
    r = subprocess.run([sys.executable, "-m", "rspcover", *args], capture_output=True, check=True)
    return r.stdout


def test_ac11_determinism(verdict):
    with verdict("AC11 byte-identical reruns"):
        table = ("table", "--algo", "spiral", "--n-min", "2", "--n-max", "200")
        assert _cli(*table) == _cli(*table)
        sim = ("simulate", "--algo", "spiral", "--n", "64", "--trials", "100000", "--seed", "42")
        assert _cli(*sim) == _cli(*sim)
