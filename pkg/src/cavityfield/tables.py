"""Row builders and CSV/JSON emitters used by the command line.

Floats are written with 17 significant digits so tables round-trip
exactly and repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Sequence

import numpy as np

from .classical import ModeState, convergence_study, observed_orders
from .fock import (FockContext, coherent_amplitude_for, coherent_state, expect,
                   field_operators)
from .modes import CavityConfig, ZGrid

SNAPSHOT_COLUMNS = ["z", "re_Ex", "im_Ex", "re_Hy", "im_Hy"]
SCAN_COLUMNS = ["theta", "energy", "ampere_std", "faraday_std", "ampere_dual", "faraday_dual"]
RESIDUAL_KEYS = ["ampere_standard", "faraday_standard", "ampere_dual", "faraday_dual"]
CONVERGENCE_COLUMNS = ["level", "dz", "dt", *RESIDUAL_KEYS, *(f"order_{k}" for k in RESIDUAL_KEYS)]
EXPECT_COLUMNS = ["z", "t", "re_E", "im_E", "E2", "re_H", "im_H", "H2"]


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if value is None:
        return ""
    return format(float(value), ".17g")


def to_csv(rows: Sequence[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    return value


def to_json(rows: Sequence[dict], columns: Sequence[str]) -> str:
    records = [{c: _json_safe(row.get(c)) for c in columns} for row in rows]
    return json.dumps(records, indent=2) + "\n"


def render(rows: Sequence[dict], columns: Sequence[str], output_format: str) -> str:
    if output_format == "json":
        return to_json(rows, columns)
    return to_csv(rows, columns)


def snapshot_rows(snapshot) -> list[dict]:
    return [
        {"z": z, "re_Ex": e.real, "im_Ex": e.imag, "re_Hy": h.real, "im_Hy": h.imag}
        for z, e, h in zip(snapshot.z, snapshot.E_x, snapshot.H_y)
    ]


def convergence_rows(family: int, states: Sequence[ModeState], cfg: CavityConfig, grid: ZGrid,
                     t: float, dt: float, levels: int) -> list[dict]:
    reports = convergence_study(family, states, cfg, grid, t, dt, levels)
    orders = {k: [None, *observed_orders([getattr(r, k) for r in reports])] for k in RESIDUAL_KEYS}
    rows = []
    for i, rep in enumerate(reports):
        row = {"level": i, **rep.as_dict()}
        for k in RESIDUAL_KEYS:
            row[f"order_{k}"] = orders[k][i]
        rows.append(row)
    return rows


def expectation_rows(family: int, mode: ModeState, cfg: CavityConfig, grid: ZGrid, t: float,
                     dim: int, coherent: complex | None = None) -> list[dict]:
    """Coherent-state field moments of one mode along the grid at time ``t``."""
    ctx = FockContext.for_mode(cfg, mode.alpha, dim)
    beta = coherent_amplitude_for(mode, cfg) if coherent is None else coherent
    psi = coherent_state(beta, ctx)
    rows = []
    for z in grid.z_values:
        E, H = field_operators(family, ctx, cfg, mode.alpha, float(z), t)
        e, h = expect(E, psi), expect(H, psi)
        rows.append({
            "z": z, "t": t,
            "re_E": e.real, "im_E": e.imag, "E2": expect(E @ E, psi).real,
            "re_H": h.real, "im_H": h.imag, "H2": expect(H @ H, psi).real,
        })
    return rows
