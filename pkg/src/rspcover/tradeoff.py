"""Covering tables and the classical-bits versus entanglement trade-off.

A resource state with smaller Schmidt coefficient ``r`` lets the sender
prepare any state within infidelity ``r**2`` of a site. The cheapest point
set that covers the sphere at that radius fixes the index message length
``log2 N``; the entanglement spent is the binary entropy of ``r**2``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoCoverAvailable
from .pointsets import berry_grid, spiral_points
from .voronoi import covering_radius

GENERATORS = ("spiral", "berry-grid")
STEP12_BITS = 2
_BOUNDARY = 1e-12


@dataclass(frozen=True)
class CoverEntry:
    """One table row. ``d`` is set only for box-grid rows, whose messages
    index all ``d**3`` grid triples rather than the distinct points."""

    n: int
    rho_f: float
    d: int | None = None

    @property
    def message_size(self) -> int:
        return self.d ** 3 if self.d is not None else self.n


@dataclass(frozen=True)
class CoverTable:
    label: str
    entries: tuple[CoverEntry, ...]

    def __post_init__(self):
        ns = [e.n for e in self.entries]
        if ns != sorted(set(ns)):
            raise ValueError("table entries must be sorted by n with unique n")

    def __len__(self) -> int:
        return len(self.entries)

    def rho(self, n: int) -> float:
        for e in self.entries:
            if e.n == n:
                return e.rho_f
        raise KeyError(n)


def _spiral_entry(n: int) -> CoverEntry:
    return CoverEntry(n, covering_radius(spiral_points(n)).rho_f)


def _grid_entry(d: int) -> CoverEntry:
    ps = berry_grid(d, dedup=True)
    return CoverEntry(len(ps), covering_radius(ps).rho_f, d)


def build_table(generator: str, n_min: int, n_max: int, workers: int = 1) -> CoverTable:
    """Exact covering radius for every size in ``n_min..n_max``.

    For ``"berry-grid"`` the range runs over the grid resolution ``d`` and
    rows are keyed by the number of distinct points. If two resolutions
    give the same count, the smaller resolution is kept.
    """
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}")
    if not 2 <= n_min <= n_max:
        raise ValueError(f"need 2 <= n_min <= n_max, got {n_min}..{n_max}")
    job = _spiral_entry if generator == "spiral" else _grid_entry
    sizes = range(n_min, n_max + 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(job, sizes, chunksize=8))
    else:
        rows = [job(k) for k in sizes]
    by_n: dict[int, CoverEntry] = {}
    for row in rows:
        by_n.setdefault(row.n, row)
    return CoverTable(f"{generator}({n_min}..{n_max})", tuple(by_n[k] for k in sorted(by_n)))


def _covering_entries(table: CoverTable, rf: float):
    return [e for e in table.entries if e.rho_f <= rf + _BOUNDARY]


def min_n(table: CoverTable, rf: float) -> int:
    """Smallest tabulated ``n`` whose covering radius is at most ``rf``."""
    if not 0.0 < rf <= 1.0:
        raise DomainError(f"rf must lie in (0, 1], got {rf}")
    ok = _covering_entries(table, rf)
    if not ok:
        raise NoCoverAvailable(
            f"no entry of {table.label} covers rf={rf:.6g}; extend the table"
        )
    return ok[0].n


def cheapest_entry(table: CoverTable, rf: float) -> CoverEntry:
    """Covering entry with the shortest index message (ties to smaller n)."""
    if not 0.0 < rf <= 1.0:
        raise DomainError(f"rf must lie in (0, 1], got {rf}")
    ok = _covering_entries(table, rf)
    if not ok:
        raise NoCoverAvailable(
            f"no entry of {table.label} covers rf={rf:.6g}; extend the table"
        )
    return min(ok, key=lambda e: (e.message_size, e.n))


def ebits(r_squared: float) -> float:
    """Entanglement entropy (bits) of a two-qubit pure state with r**2 = r_squared."""
    if not 0.0 < r_squared <= 0.5:
        raise DomainError(f"r^2 must lie in (0, 0.5], got {r_squared}")
    p, q = r_squared, 1.0 - r_squared
    return -p * math.log2(p) - q * math.log2(q)


def area_lower_bound(rf: float) -> float:
    """``log2(1/rf)`` bits.

    Each cap of infidelity radius ``rf`` covers a fraction ``rf`` of the
    sphere's area, so any cover needs at least ``1/rf`` caps.
    """
    if not 0.0 < rf <= 1.0:
        raise DomainError(f"rf must lie in (0, 1], got {rf}")
    return -math.log2(rf)


@dataclass(frozen=True)
class TradeoffPoint:
    r_squared: float
    ebits: float
    n: int
    cbits_step3: float
    cbits_total: float
    index_bits: int
    message_size: int
    d: int | None = None

    @classmethod
    def from_entry(cls, r_squared: float, entry: CoverEntry) -> "TradeoffPoint":
        m = entry.message_size
        bits = math.log2(m)
        return cls(
            r_squared=r_squared,
            ebits=ebits(r_squared),
            n=entry.n,
            cbits_step3=bits,
            cbits_total=bits + STEP12_BITS,
            index_bits=(m - 1).bit_length(),
            message_size=m,
            d=entry.d,
        )


class TradeoffCurve(list):
    """List of :class:`TradeoffPoint`; ``uncovered`` holds the skipped r**2 values."""

    def __init__(self, points=(), uncovered=()):
        super().__init__(points)
        self.uncovered = list(uncovered)


def tradeoff_curve(table: CoverTable, r2_grid) -> TradeoffCurve:
    """Cheapest covering entry for each r**2 in the grid.

    Grid values the table cannot cover are left out of the curve and listed
    in ``curve.uncovered``.
    """
    points, uncovered = [], []
    for r2 in r2_grid:
        r2 = float(r2)
        if not 0.0 < r2 <= 0.5:
            raise DomainError(f"r^2 grid values must lie in (0, 0.5], got {r2}")
        try:
            entry = cheapest_entry(table, r2)
        except NoCoverAvailable:
            uncovered.append(r2)
            continue
        points.append(TradeoffPoint.from_entry(r2, entry))
    return TradeoffCurve(points, uncovered)


def r2_grid(r2_min: float, r2_max: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if not 0.0 < r2_min <= r2_max <= 0.5:
        raise DomainError(f"need 0 < r2_min <= r2_max <= 0.5, got {r2_min}, {r2_max}")
    if steps == 1:
        return np.array([r2_max])
    return np.linspace(r2_min, r2_max, steps)


def baseline_table(rf_target: float, d_max: int = 64) -> CoverTable:
    """Box-grid table grown one resolution at a time until some row covers
    ``rf_target`` or ``d_max`` is reached."""
    rows: dict[int, CoverEntry] = {}
    for d in range(2, d_max + 1):
        row = _grid_entry(d)
        rows.setdefault(row.n, row)
        if row.rho_f <= rf_target + _BOUNDARY:
            break
    return CoverTable(f"berry-grid(2..{d})", tuple(rows[k] for k in sorted(rows)))
