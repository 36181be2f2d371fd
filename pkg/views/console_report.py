"""
Plain-text rendering of verification results and run summaries.
"""

import sys
from typing import Optional, Sequence, TextIO

import numpy as np

from models.data_models import RunSummary, VerificationResult


def _fmt_vector(v: Optional[np.ndarray]) -> str:
    if v is None:
        return "(none)"
    return "[" + ", ".join(f"{x:.12g}" for x in v) + "]"


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3e}"


def print_verification(result: VerificationResult, stream: TextIO = sys.stdout):
    """Prints the certified solution and the residuals behind it."""
    lines = [
        f"problem:        {result.kind}",
        f"known solution: {_fmt_vector(result.known_solution)}",
        f"certificate:    {result.certificate} residual {_fmt(result.residual)}",
    ]
    if result.modulus is not None:
        lines.append(f"modulus:        {result.modulus:.6g}")
    if result.feasibility_residual is not None:
        lines.append(f"feasibility:    max member distance {_fmt(result.feasibility_residual)}")
    if result.regularity_constant is not None:
        lines.append(f"regularity:     min ratio max_i d(x,X_i)/d(x,X) = {result.regularity_constant:.6g}")
    lines.extend(f"note:           {n}" for n in result.notes)
    stream.write("\n".join(lines) + "\n")


def print_run_summary(summaries: Sequence[RunSummary], stream: TextIO = sys.stdout):
    """One line per replica with the headline errors."""
    for s in summaries:
        stream.write(
            f"replica {s.replica:3d}: |x_N - x*| {_fmt(s.dist_to_solution)}  "
            f"|xbar_N - x*| {_fmt(s.dist_avg_to_solution)}  d(xbar_N, D) {_fmt(s.dist_avg_to_feasible)}  "
            f"{s.wall_time:.2f}s\n"
        )
