"""
CSV writers for run traces and replica summaries.

Floats are written with 17 significant digits so that replays compare
byte-for-byte; undefined metrics are empty cells; lines end with LF.
"""

import os
from typing import List, Sequence

import numpy as np
import pandas as pd

from models.data_models import TRACE_COLUMNS, RunSummary

CSV_OPTIONS = {"index": False, "float_format": "%.17g", "na_rep": "", "lineterminator": "\n"}

SUMMARY_SCALARS = [
    "dist_to_solution", "dist_avg_to_solution", "dist_avg_to_feasible", "objective_avg",
    "tail_positive_variation", "sup_domain_ratio", "gap", "wall_time",
]


def write_trace(trace: pd.DataFrame, path: str):
    """Writes one replica's trace with the fixed column order."""
    _ensure_parent(path)
    trace.loc[:, TRACE_COLUMNS].to_csv(path, **CSV_OPTIONS)


def summary_frame(summaries: Sequence[RunSummary]) -> pd.DataFrame:
    """One row per replica: ids, final x and xbar coordinates, then the scalar metrics."""
    rows: List[dict] = []
    for s in sorted(summaries, key=lambda s: s.replica):
        row = {"replica": s.replica, "seed": s.seed, "iterations": s.iterations}
        row.update({f"x_{j}": v for j, v in enumerate(s.final_x)})
        row.update({f"xbar_{j}": v for j, v in enumerate(s.final_xbar)})
        for name in SUMMARY_SCALARS:
            value = getattr(s, name)
            row[name] = np.nan if value is None else value
        rows.append(row)
    frame = pd.DataFrame(rows)
    for col in ("replica", "seed", "iterations"):
        frame[col] = frame[col].astype("uint64" if col == "seed" else "int64")
    return frame


def write_summary(summaries: Sequence[RunSummary], path: str):
    _ensure_parent(path)
    summary_frame(summaries).to_csv(path, **CSV_OPTIONS)


def _ensure_parent(path: str):
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory, exist_ok=True)
