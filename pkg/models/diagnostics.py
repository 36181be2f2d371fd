"""
Runtime diagnostics for SPPA runs.

These turn the stability and convergence statements the iteration is built
on into measurable series: distances to a known solution (Fejer behaviour),
distances to the essential domain relative to the accumulated steps, the
one-step drift of the squared distance, and the exactness of the running
average.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from models.data_models import SppaState, StepSchedule
from models.numerics import as_vector
from models.problems.oracles import set_distance
from models.random_family import RandomFamily, SampleStream
from models.sppa import sppa_step, tail_positive_variation

logger = logging.getLogger(__name__)


@dataclass
class FejerSeries:
    distances: np.ndarray
    tail_positive_variation: float
    max_increase: float


@dataclass
class DomainDistanceSeries:
    distances: np.ndarray
    ratio: np.ndarray
    sup_ratio: float


@dataclass
class DriftResult:
    """
    Per-step Monte-Carlo estimate of
    E[||x_{n+1} - x*||^2 - ||x_n - x*||^2] - (c / (2 beta)) lambda_n^2.
    """
    mean: np.ndarray
    stderr: np.ndarray
    pooled_mean: float
    pooled_stderr: float
    second_moment: float
    beta: float


def fejer_diagnostic(iterates: np.ndarray, x_star) -> FejerSeries:
    """
    Distance series ||x_n - x*|| over the recorded iterates.

    Args:
        iterates: Array of shape (rows, d), typically RunReport.iterates.
        x_star: Reference solution.
    """
    iterates = np.atleast_2d(np.asarray(iterates, dtype=float))
    x_star = as_vector(x_star, dim=iterates.shape[1], name="x_star")
    dist = np.linalg.norm(iterates - x_star, axis=1)
    increase = float(np.max(np.diff(dist))) if dist.size > 1 else 0.0
    return FejerSeries(dist, tail_positive_variation(dist), increase)


def domain_distance_diagnostic(iterates: np.ndarray, lambdas: np.ndarray, family: RandomFamily) -> DomainDistanceSeries:
    """
    d(x_k, D) and the running ratio sum_{j<=k} d(x_j, D) / sum_{j<=k} lambda_j.

    `iterates` and `lambdas` must cover every step (stride one), row k being
    the iterate produced with step lambdas[k].
    """
    iterates = np.atleast_2d(np.asarray(iterates, dtype=float))
    lambdas = np.asarray(lambdas, dtype=float)
    if iterates.shape[0] != lambdas.size:
        raise ValueError("one step size per iterate is required")
    domain = family.essential_domain()
    dist = np.array([set_distance(domain, x) for x in iterates])
    ratio = np.cumsum(dist) / np.cumsum(lambdas)
    return DomainDistanceSeries(dist, ratio, float(np.max(ratio)))


def batch_average(iterates: np.ndarray, lambdas: np.ndarray) -> np.ndarray:
    """sum_k lambda_k x_k / sum_k lambda_k, recomputed in one pass."""
    lambdas = np.asarray(lambdas, dtype=float)
    return lambdas @ np.asarray(iterates, dtype=float) / lambdas.sum()


def robbins_siegmund_drift(family: RandomFamily, schedule: StepSchedule, x0, x_star, steps: int, replicas: int,
                           master_seed: int, beta: float = 0.25) -> DriftResult:
    """
    Estimates the drift of the squared distance to x* over independent replicas.

    With c = sum_i w_i ||A(i, x*)||^2 the statistic
    ||x_{n+1} - x*||^2 - ||x_n - x*||^2 - (c / (2 beta)) lambda_n^2
    has nonpositive conditional mean, so its Monte-Carlo mean must not be
    significantly positive at any step.
    """
    x0 = as_vector(x0, dim=family.dim, name="x0")
    x_star = as_vector(x_star, dim=family.dim, name="x_star")
    c = family.zero_certificate(x_star).second_moment
    penalty = c / (2.0 * beta) * schedule.steps(steps) ** 2
    samples = np.empty((replicas, steps))
    for r in range(replicas):
        stream = SampleStream.for_replica(master_seed, r)
        state = SppaState.initial(x0)
        before = float(np.sum((x0 - x_star) ** 2))
        for n in range(steps):
            state = sppa_step(state, family, schedule, stream)
            after = float(np.sum((state.x - x_star) ** 2))
            samples[r, n] = after - before
            before = after
    samples -= penalty
    mean = samples.mean(axis=0)
    stderr = samples.std(axis=0, ddof=1) / np.sqrt(replicas) if replicas > 1 else np.zeros(steps)
    pooled = samples.mean(axis=1)
    pooled_stderr = float(pooled.std(ddof=1) / np.sqrt(replicas)) if replicas > 1 else 0.0
    logger.debug("drift over %d replicas x %d steps: pooled mean %.3e", replicas, steps, float(pooled.mean()))
    return DriftResult(mean, stderr, float(pooled.mean()), pooled_stderr, c, beta)


def average_error(iterates: np.ndarray, lambdas: np.ndarray, xbar: np.ndarray) -> Optional[float]:
    """Relative difference between a running average and its batch recomputation."""
    batch = batch_average(iterates, lambdas)
    return float(np.linalg.norm(xbar - batch) / max(1.0, float(np.linalg.norm(batch))))
