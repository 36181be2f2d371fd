"""
Deterministic reference solvers.

These produce the ground truth the stochastic runs are measured against:
exact projections onto intersections (Dykstra), constrained minimizers of
mean quadratics (projected gradient), zeros of affine mean operators
(dense solve) and solutions of affine variational inequalities (projection
fixed point). All of them work to an internal tolerance of 1e-10.
"""

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import linalg

from models.errors import InvalidProblem, NoConvergence, NotMonotone, SingularMean, SingularSystem
from models.functions import Quadratic
from models.numerics import CONDITION_WARNING, as_vector, min_sym_eigenvalue, solve_dense, spectral_norm
from models.sets import ConvexSet, FullSpace, Intersection

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-10
DYKSTRA_MAX_SWEEPS = 10_000
SOLVER_MAX_ITER = 100_000


class ProjectionResult(NamedTuple):
    point: np.ndarray
    distance: float
    iterations: int


class OracleResult(NamedTuple):
    point: np.ndarray
    residual: float
    iterations: int


def dykstra_project(region: ConvexSet, x, tol: float = ORACLE_TOLERANCE,
                    max_iter: int = DYKSTRA_MAX_SWEEPS) -> ProjectionResult:
    """
    Projects x onto an intersection of catalog sets with Dykstra's algorithm.

    Plain alternating projections only reach some point of the intersection;
    the Dykstra correction terms make the limit the nearest point. A point
    already inside every member is returned unchanged, and intersections
    that simplify to one closed-form set are projected directly.

    Args:
        region: An Intersection, or any catalog set.
        x: Point to project.
        tol: Stopping tolerance on the sweep change, the change of the
            correction terms and the member distances, relative to 1 + ||x||.
        max_iter: Maximum number of full sweeps.

    Returns:
        ProjectionResult: (point, ||x - point||, sweeps used)

    Raises:
        NoConvergence: when the cap is hit, typically for an empty
            intersection.
    """
    x = as_vector(x, dim=region.dim)
    target = region.simplified() if isinstance(region, Intersection) else region
    if not isinstance(target, Intersection):
        p = target.project(x)
        return ProjectionResult(p, float(np.linalg.norm(x - p)), 0)

    members = target.members
    if all(m.contains(x, 0.0) for m in members):
        return ProjectionResult(x.copy(), 0.0, 0)

    scale = tol * (1.0 + float(np.linalg.norm(x)))
    y = x.copy()
    increments = [np.zeros_like(x) for _ in members]
    residual = np.inf
    for sweep in range(1, max_iter + 1):
        previous = y
        drift = 0.0
        for i, member in enumerate(members):
            z = y + increments[i]
            y = member.project(z)
            correction = z - y
            drift += float(np.sum((correction - increments[i]) ** 2))
            increments[i] = correction
        # y may sit still for several sweeps while the corrections keep moving
        if float(np.linalg.norm(y - previous)) <= scale and drift <= scale * scale:
            residual = max(m.distance(y) for m in members)
            if residual <= scale:
                return ProjectionResult(y, float(np.linalg.norm(x - y)), sweep)
    residual = max(m.distance(y) for m in members)
    raise NoConvergence("dykstra", max_iter, residual)


def set_distance(region: ConvexSet, x: np.ndarray) -> float:
    """d(x, region), through Dykstra for intersections."""
    if isinstance(region, FullSpace):
        return 0.0
    if isinstance(region, Intersection):
        return dykstra_project(region, x).distance
    return region.distance(x)


def _project(region: Optional[ConvexSet], x: np.ndarray, tol: float) -> np.ndarray:
    if region is None or isinstance(region, FullSpace):
        return x
    return dykstra_project(region, x, tol).point


def kkt_residual(objective: Quadratic, feasible: Optional[ConvexSet], x: np.ndarray) -> float:
    """||x - P_X(x - grad F(x)/L)|| with L the largest curvature of F."""
    lip = float(linalg.eigvalsh(objective.Q)[-1])
    if lip <= 0.0:
        raise InvalidProblem("objective has no positive curvature")
    step = x - objective.gradient(x) / lip
    return float(np.linalg.norm(x - _project(feasible, step, ORACLE_TOLERANCE * 1e-2)))


def projected_gradient_oracle(objective: Quadratic, feasible: Optional[ConvexSet], tol: float = ORACLE_TOLERANCE,
                              max_iter: int = SOLVER_MAX_ITER, x0=None) -> OracleResult:
    """
    Minimizes a quadratic over a feasible set with step 1/L projected gradient.

    Without constraints and with positive definite curvature the minimizer
    -Q^{-1} b is returned from a direct solve.
    """
    q, b = objective.Q, objective.b
    lip = float(linalg.eigvalsh(q)[-1])
    if lip <= 0.0:
        raise InvalidProblem("objective has no positive curvature")
    if feasible is None or isinstance(feasible, FullSpace):
        if min_sym_eigenvalue(q) <= 0.0:
            raise InvalidProblem("unconstrained objective is not strongly convex")
        x = solve_dense(q, -b)
        return OracleResult(x, float(np.linalg.norm(q @ x + b)), 0)

    inner_tol = tol * 1e-2
    x = np.zeros(objective.dim) if x0 is None else as_vector(x0, dim=objective.dim)
    x = _project(feasible, x, inner_tol)
    residual = np.inf
    for it in range(1, max_iter + 1):
        x_new = _project(feasible, x - (q @ x + b) / lip, inner_tol)
        residual = float(np.linalg.norm(x - x_new))
        x = x_new
        if residual <= tol:
            residual = kkt_residual(objective, feasible, x)
            logger.debug("projected gradient converged in %d iterations (residual %.3e)", it, residual)
            return OracleResult(x, residual, it)
    raise NoConvergence("projected gradient", max_iter, residual)


def mean_linear_solution(t_bar: np.ndarray, offset: np.ndarray) -> OracleResult:
    """
    The unique zero of z -> T z + t.

    Raises:
        SingularMean: T is singular or too ill-conditioned to trust.
    """
    cond = np.linalg.cond(t_bar)
    if not np.isfinite(cond) or cond > CONDITION_WARNING:
        raise SingularMean(f"mean linear map is singular (condition number {cond:.3e})")
    try:
        z = solve_dense(t_bar, -offset)
    except SingularSystem as exc:
        raise SingularMean(str(exc)) from exc
    return OracleResult(z, float(np.linalg.norm(t_bar @ z + offset)), 0)


def natural_residual(m: np.ndarray, b: np.ndarray, feasible: Optional[ConvexSet], x: np.ndarray) -> float:
    """||x - P_X(x - F(x))|| for the affine map F(x) = M x + b."""
    return float(np.linalg.norm(x - _project(feasible, x - (m @ x + b), ORACLE_TOLERANCE * 1e-2)))


def projection_fixed_point_oracle(m: np.ndarray, b: np.ndarray, feasible: Optional[ConvexSet],
                                  tol: float = ORACLE_TOLERANCE, max_iter: int = SOLVER_MAX_ITER) -> OracleResult:
    """
    Solves the affine variational inequality 0 in M x + b + N_X(x).

    Iterates x <- P_X(x - tau (M x + b)) with tau = alpha / ||M||^2, which is
    a contraction when M is strongly monotone with modulus alpha.
    """
    alpha = min_sym_eigenvalue(m)
    if alpha <= 0.0:
        raise NotMonotone("projection fixed point needs a strongly monotone map")
    tau = alpha / spectral_norm(m) ** 2
    inner_tol = tol * 1e-2
    x = _project(feasible, np.zeros(b.size), inner_tol)
    residual = np.inf
    for it in range(1, max_iter + 1):
        x = _project(feasible, x - tau * (m @ x + b), inner_tol)
        residual = natural_residual(m, b, feasible, x)
        if residual <= tol:
            logger.debug("projection fixed point converged in %d iterations", it)
            return OracleResult(x, residual, it)
    raise NoConvergence("projection fixed point", max_iter, residual)


def primal_dual_gap(t_bar: np.ndarray, offset: np.ndarray, dx: int, z) -> Optional[float]:
    """
    Gap max_y L(xbar, y) - min_x L(x, ybar) of the mean saddle function.

    L(x, y) = 0.5 x^T P x + x^T K y - 0.5 y^T R y + c^T x - d^T y is read off
    the mean saddle map T = [[P, K], [-K^T, R]], t = (c, d). The gap is only
    finite when P and R are positive definite; None otherwise.
    """
    z = np.asarray(z, dtype=float)
    p, k, r = t_bar[:dx, :dx], t_bar[:dx, dx:], t_bar[dx:, dx:]
    c, d = offset[:dx], offset[dx:]
    x, y = z[:dx], z[dx:]
    if min_sym_eigenvalue(p) <= 0.0 or min_sym_eigenvalue(r) <= 0.0:
        return None
    u = k.T @ x - d
    v = k @ y + c
    sup_y = 0.5 * x @ p @ x + c @ x + 0.5 * u @ np.linalg.solve(r, u)
    inf_x = -0.5 * y @ r @ y - d @ y - 0.5 * v @ np.linalg.solve(p, v)
    return float(sup_y - inf_x)


def linear_regularity_witness(sets: Sequence[ConvexSet], radius: float, samples: int,
                              rng: np.random.Generator) -> float:
    """
    Empirical lower bound of max_i d(x, X_i) / d(x, X) over a ball.

    Points are drawn uniformly from the ball of the given radius around the
    origin; points inside X are skipped. Returns inf when every sample is
    feasible.
    """
    sets = list(sets)
    region = Intersection(tuple(sets))
    dim = region.dim
    worst = np.inf
    for _ in range(samples):
        direction = rng.standard_normal(dim)
        direction /= np.linalg.norm(direction)
        x = radius * rng.random() ** (1.0 / dim) * direction
        dist = set_distance(region, x)
        if dist <= ORACLE_TOLERANCE:
            continue
        worst = min(worst, max(set_distance(s, x) for s in sets) / dist)
    return float(worst)
