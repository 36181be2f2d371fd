"""
The stochastic proximal point iteration.

Each step samples one member of the random family and applies its resolvent
with the scheduled step: x_{n+1} = J_{lambda_n}(xi_{n+1}, x_n). The iterates
are folded into a step-weighted running average as they are produced.
"""

import logging
import time
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from models.data_models import (TRACE_COLUMNS, DiagnosticsSettings, RunReport, RunSummary, SppaState, StepSchedule,
                                default_stride)
from models.errors import DimensionMismatch, InvalidProblem, NonFiniteIterate
from models.numerics import as_vector
from models.problems.oracles import set_distance
from models.random_family import RandomFamily, SampleStream

logger = logging.getLogger(__name__)


def update_average(xbar: np.ndarray, lam_sum: float, x_new: np.ndarray, lam_new: float) -> Tuple[np.ndarray, float]:
    """
    Folds x_new with weight lam_new into a weighted mean of total weight lam_sum.

    Returns:
        (new average, new total weight)
    """
    total = lam_sum + lam_new
    if lam_sum == 0.0:
        return np.array(x_new, dtype=float), total
    return xbar + (lam_new / total) * (x_new - xbar), total


def sppa_step(state: SppaState, family: RandomFamily, schedule: StepSchedule, stream: SampleStream,
              burn_in: int = 0) -> SppaState:
    """
    One iteration: sample an index, apply its resolvent, update the average.

    Steps with n <= burn_in (counting the new iterate) leave the average
    untouched.

    Raises:
        NonFiniteIterate: the new iterate has a non-finite coordinate.
    """
    if state.x.shape != (family.dim,):
        raise DimensionMismatch(f"state has shape {state.x.shape}, family dimension is {family.dim}")
    i = family.sample(stream)
    lam = schedule.step(state.n)
    n = state.n + 1
    x, xbar, lam_sum = _advance(family.members[i], lam, n, state.x, state.xbar, state.lam_sum, burn_in)
    return SppaState(n, x, xbar, lam_sum, i, lam)


def _advance(member, lam: float, n: int, x: np.ndarray, xbar: np.ndarray, lam_sum: float,
             burn_in: int) -> Tuple[np.ndarray, np.ndarray, float]:
    """Resolvent step to x_n and the matching average update, shared by sppa_step and run."""
    x = member.resolvent(lam, x)
    if not np.isfinite(x).all():
        raise NonFiniteIterate(n)
    if n > burn_in:
        xbar, lam_sum = update_average(xbar, lam_sum, x, lam)
    else:
        xbar, lam_sum = x, 0.0
    return x, xbar, lam_sum


def run(family: RandomFamily, schedule: StepSchedule, x0, iterations: int, stream: SampleStream,
        diagnostics: Optional[DiagnosticsSettings] = None, stride: Optional[int] = None,
        x_star: Optional[np.ndarray] = None, objective: Optional[Callable[[np.ndarray], float]] = None,
        replica: int = 0) -> RunReport:
    """
    Runs `iterations` steps from x0 and records the trace.

    Rows are written for every n that is a multiple of the stride and for the
    final step. Distances to the essential domain of the family go through
    the Dykstra oracle when the domain is an intersection.

    Args:
        family: The random operator family.
        schedule: Step-size schedule.
        x0: Starting point.
        iterations: Number of steps (>= 1).
        stream: Owned sample stream; advanced by exactly `iterations` draws.
        diagnostics: Burn-in and domain-ratio settings.
        stride: Trace stride; defaults to the row-limit rule.
        x_star: Known solution, enables the distance-to-solution column.
        objective: F, evaluated at the average for the objective column.
        replica: Replica id stored in the summary.

    Returns:
        RunReport: Trace, summary and the recorded arrays.
    """
    if iterations < 1:
        raise InvalidProblem("iterations must be at least 1")
    diagnostics = diagnostics or DiagnosticsSettings()
    stride = stride or default_stride(iterations)
    x0 = as_vector(x0, dim=family.dim, name="x0")
    if x_star is not None:
        x_star = as_vector(x_star, dim=family.dim, name="x_star")
    domain = family.essential_domain()

    started = time.perf_counter()
    x = np.array(x0, dtype=float)
    xbar, lam_sum = x.copy(), 0.0
    burn_in = diagnostics.burn_in
    members, sample, step = family.members, family.sample, schedule.step
    lambdas = np.empty(iterations)
    indices = np.empty(iterations, dtype=np.int64)
    rows: List[list] = []
    iterates: List[np.ndarray] = []
    averages: List[np.ndarray] = []
    ratios: List[float] = []
    dist_sum = 0.0
    lam_total = 0.0
    sup_ratio = 0.0

    logger.debug("replica %d: %d steps, stride %d, dim %d", replica, iterations, stride, family.dim)
    for k in range(iterations):
        i = sample(stream)
        lam = step(k)
        n = k + 1
        x, xbar, lam_sum = _advance(members[i], lam, n, x, xbar, lam_sum, burn_in)
        lambdas[k] = lam
        indices[k] = i

        dist_x = None
        if diagnostics.domain_ratio:
            dist_x = set_distance(domain, x)
            dist_sum += dist_x
            lam_total += lam
            sup_ratio = max(sup_ratio, dist_sum / lam_total)
        if n % stride and n != iterations:
            continue

        if dist_x is None:
            dist_x = set_distance(domain, x)
        averaged = n > burn_in
        rows.append([
            n,
            lam,
            i,
            float(np.linalg.norm(x - x_star)) if x_star is not None else np.nan,
            dist_x,
            set_distance(domain, xbar) if averaged else np.nan,
            _objective(objective, xbar) if averaged else np.nan,
            float(np.linalg.norm(x)),
        ])
        iterates.append(x)
        averages.append(xbar if averaged else np.full(family.dim, np.nan))
        if diagnostics.domain_ratio:
            ratios.append(dist_sum / lam_total)

    trace = pd.DataFrame(rows, columns=TRACE_COLUMNS)
    trace["n"] = trace["n"].astype(np.int64)
    trace["xi_index"] = trace["xi_index"].astype(np.int64)
    iterates_arr = np.vstack(iterates)
    ratio_arr = np.array(ratios) if diagnostics.domain_ratio else None

    summary = RunSummary(
        replica=replica,
        seed=stream.seed,
        iterations=iterations,
        final_x=x.copy(),
        final_xbar=xbar.copy(),
        wall_time=time.perf_counter() - started,
        dist_avg_to_feasible=set_distance(domain, xbar),
        objective_avg=_optional(_objective(objective, xbar)),
        sup_domain_ratio=sup_ratio if diagnostics.domain_ratio else None,
    )
    if x_star is not None:
        summary.dist_to_solution = float(np.linalg.norm(x - x_star))
        summary.dist_avg_to_solution = float(np.linalg.norm(xbar - x_star))
        summary.tail_positive_variation = tail_positive_variation(trace["dist_to_solution"].to_numpy())
    logger.info("replica %d finished %d steps in %.3fs", replica, iterations, summary.wall_time)
    return RunReport(trace, summary, iterates_arr, np.vstack(averages), lambdas, indices, ratio_arr)


def tail_positive_variation(series: np.ndarray) -> float:
    """Sum of the upward moves over the last half of a series."""
    tail = np.asarray(series, dtype=float)[len(series) // 2:]
    if tail.size < 2:
        return 0.0
    return float(np.sum(np.maximum(np.diff(tail), 0.0)))


def _objective(objective, x) -> float:
    if objective is None:
        return np.nan
    value = objective(x)
    return value if np.isfinite(value) else np.nan


def _optional(value: float) -> Optional[float]:
    return None if value is None or not np.isfinite(value) else float(value)
