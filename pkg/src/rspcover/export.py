"""Plain-text serialization: fixed-precision CSV and JSON records."""
from __future__ import annotations

import csv
import io
import json
import math

from .pointsets import PointSet
from .tradeoff import CoverEntry, CoverTable, TradeoffCurve, area_lower_bound, ebits

TABLE_HEADER = ["n", "rho_f"]
GRID_TABLE_HEADER = ["n", "rho_f", "d", "n_grid"]
TRADEOFF_HEADER = [
    "r_squared",
    "ebits",
    "n",
    "cbits_step3",
    "cbits_total",
    "index_bits",
    "area_bound_cbits",
]
COMPARE_HEADER = ["baseline_n", "baseline_d", "baseline_cbits_step3", "baseline_cbits_total"]


def fmt(x: float) -> str:
    """9 significant digits, locale independent, no negative zero."""
    if x == 0.0:
        return "0"
    return f"{x:.9g}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def points_csv(ps: PointSet) -> str:
    rows = ([i, fmt(x), fmt(y), fmt(z)] for i, (x, y, z) in enumerate(ps.points.tolist()))
    return _csv_text(["index", "x", "y", "z"], rows)


def table_csv(table: CoverTable) -> str:
    if any(e.d is not None for e in table.entries):
        rows = ([e.n, fmt(e.rho_f), e.d, e.message_size] for e in table.entries)
        return _csv_text(GRID_TABLE_HEADER, rows)
    return _csv_text(TABLE_HEADER, ([e.n, fmt(e.rho_f)] for e in table.entries))


def read_table_csv(text: str, label: str = "file") -> CoverTable:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or not {"n", "rho_f"} <= set(reader.fieldnames):
        raise ValueError("table CSV needs columns n,rho_f")
    entries = []
    for row in reader:
        d = row.get("d")
        entries.append(CoverEntry(int(row["n"]), float(row["rho_f"]), int(d) if d else None))
    return CoverTable(label, tuple(entries))


def tradeoff_csv(curve: TradeoffCurve, grid, baseline: TradeoffCurve | None = None) -> str:
    """One row per grid value. Values the table cannot cover keep their
    ``r_squared``, ``ebits`` and area bound, with the cost columns empty."""
    by_r2 = {p.r_squared: p for p in curve}
    base = {p.r_squared: p for p in baseline} if baseline is not None else None
    header = TRADEOFF_HEADER + (COMPARE_HEADER if base is not None else [])
    rows = []
    for r2 in (float(g) for g in grid):
        row = [fmt(r2), fmt(ebits(r2))]
        p = by_r2.get(r2)
        if p is None:
            row += ["", "", "", ""]
        else:
            row += [p.n, fmt(p.cbits_step3), fmt(p.cbits_total), p.index_bits]
        row.append(fmt(area_lower_bound(r2)))
        if base is not None:
            q = base.get(r2)
            if q is None:
                row += ["", "", "", ""]
            else:
                row += [q.n, q.d if q.d is not None else "", fmt(q.cbits_step3), fmt(q.cbits_total)]
        rows.append(row)
    return _csv_text(header, rows)


def json_record(d: dict) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v

    return json.dumps({k: clean(v) for k, v in d.items()}, indent=2) + "\n"
