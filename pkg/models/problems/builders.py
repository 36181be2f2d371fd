"""
Builders that turn application families into random operator families.

Each builder returns a ProblemInstance whose known solution (when one can be
computed) comes from a deterministic oracle and is certified on creation.
Member order is part of the contract: for constrained programs and
variational inequalities the function/operator members come first, then one
normal cone per constraint set, so index k < len(pool) selects a prox step
and index len(pool) + i selects the projection onto the i-th set.
"""

import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from models.enums import ProblemKind
from models.errors import (DimensionMismatch, DomainError, EmptyIntersection, InvalidProblem, NoConvergence,
                           SetValuedAt, UnsupportedComposite)
from models.functions import ConvexFn, Quadratic, weighted_quadratic_mean
from models.numerics import PSD_TOLERANCE, as_vector, min_sym_eigenvalue
from models.operators.affine import AffineMonotone
from models.operators.base import BaseOperator
from models.operators.saddle import SaddleBilinear
from models.operators.subdifferential import NormalCone, Subdifferential
from models.problems.instance import ProblemInstance
from models.problems.oracles import (dykstra_project, kkt_residual, mean_linear_solution, natural_residual,
                                     primal_dual_gap, projected_gradient_oracle, projection_fixed_point_oracle)
from models.random_family import RandomFamily
from models.sets import ConvexSet, FullSpace, Intersection

logger = logging.getLogger(__name__)


def _weights(count: int, weights: Optional[Sequence[float]], name: str) -> np.ndarray:
    if weights is None:
        return np.full(count, 1.0 / count)
    w = as_vector(weights, dim=count, name=name)
    if np.any(w <= 0.0):
        raise InvalidProblem(f"{name} must be strictly positive")
    return w / w.sum()


def _flatten_sets(sets: Sequence[ConvexSet]) -> List[ConvexSet]:
    out: List[ConvexSet] = []
    for s in sets:
        out.extend(s.flatten() if isinstance(s, Intersection) else [s])
    if not out:
        raise InvalidProblem("at least one constraint set is required")
    return out


def _region(sets: Sequence[ConvexSet]) -> ConvexSet:
    return sets[0] if len(sets) == 1 else Intersection(tuple(sets))


def _mean_residual(family: RandomFamily) -> Callable[[np.ndarray], float]:
    return lambda x: float(np.linalg.norm(family.mean_apply(x)))


def _member_residual(family: RandomFamily) -> Callable[[np.ndarray], float]:
    return lambda x: max(float(np.linalg.norm(m.yosida(1.0, x))) for m in family.members)


def _selection(family: RandomFamily, x_star: np.ndarray):
    try:
        return family.zero_certificate(x_star)
    except (SetValuedAt, DomainError):
        return None


def _affine_modulus(family: RandomFamily) -> Optional[float]:
    if not family.is_affine:
        return None
    t_bar, _ = family.mean_linear_part()
    return max(min_sym_eigenvalue(t_bar), 0.0)


def build_family(members: Sequence[BaseOperator], weights: Optional[Sequence[float]] = None,
                 known_solution=None) -> ProblemInstance:
    """
    Wraps an explicit operator list.

    A supplied solution is certified by the mean residual when every member
    is single-valued there, and otherwise as a common fixed point of all
    resolvents.
    """
    family = RandomFamily(tuple(members), _weights(len(members), weights, "weights"))
    certificate, residual_fn, selection = "none", None, None
    if known_solution is not None:
        x_star = as_vector(known_solution, dim=family.dim, name="known_solution")
        selection = _selection(family, x_star)
        if selection is not None:
            certificate, residual_fn = "mean_residual", _mean_residual(family)
        else:
            certificate, residual_fn = "common_zero", _member_residual(family)
    return ProblemInstance(ProblemKind.FAMILY, family, known_solution, certificate, residual_fn,
                           modulus=_affine_modulus(family), selection=selection)


def build_rotation() -> ProblemInstance:
    """The pi/2 rotation: a single skew member whose only zero is the origin."""
    family = RandomFamily((AffineMonotone.rotation_2d(),), np.ones(1))
    return ProblemInstance(ProblemKind.ROTATION, family, np.zeros(2), "mean_residual", _mean_residual(family),
                           modulus=0.0, selection=family.zero_certificate(np.zeros(2)))


def build_feasibility(sets: Sequence[ConvexSet], weights: Optional[Sequence[float]] = None,
                      anchor=None) -> ProblemInstance:
    """
    Random projections onto the given sets.

    The reference solution is the projection of `anchor` (default: the
    origin) onto the intersection.

    Raises:
        EmptyIntersection: the Dykstra oracle does not find a common point.
    """
    sets = _flatten_sets(sets)
    family = RandomFamily(tuple(NormalCone(s) for s in sets), _weights(len(sets), weights, "weights"))
    region = _region(sets)
    anchor = np.zeros(family.dim) if anchor is None else as_vector(anchor, dim=family.dim, name="anchor")
    try:
        x_star = dykstra_project(region, anchor).point
    except EmptyIntersection:
        raise
    except NoConvergence as exc:
        raise EmptyIntersection(exc.oracle, exc.iterations, exc.residual) from exc
    return ProblemInstance(ProblemKind.FEASIBILITY, family, x_star, "member_distance", _member_residual(family),
                           feasible_set=region, constraint_sets=sets)


def build_constrained_program(f_pool: Sequence[ConvexFn], f_weights: Optional[Sequence[float]],
                              sets: Sequence[ConvexSet], p0: float,
                              set_weights: Optional[Sequence[float]] = None) -> ProblemInstance:
    """
    Minimizes E f(xi, x) over the intersection of the sets.

    With probability p0 a step is the prox of a sampled f_s, otherwise the
    projection onto a sampled X_i. When every f_s is a quadratic form the
    reference solution comes from the projected-gradient oracle on the mean.
    """
    if not 0.0 < p0 < 1.0:
        raise InvalidProblem(f"p0 must lie in (0, 1), got {p0}")
    f_pool = list(f_pool)
    if not f_pool:
        raise InvalidProblem("the function pool is empty")
    for f in f_pool:
        if not isinstance(f.domain(), FullSpace):
            raise InvalidProblem("pool functions must be finite everywhere; put constraints in the sets")
    sets = _flatten_sets(sets)
    fw = _weights(len(f_pool), f_weights, "function weights")
    sw = _weights(len(sets), set_weights, "set weights")
    members = [Subdifferential(f) for f in f_pool] + [NormalCone(s) for s in sets]
    weights = np.concatenate([p0 * fw, (1.0 - p0) * sw])
    family = RandomFamily(tuple(members), weights)
    region = _region(sets)

    def objective(x):
        return float(sum(w * f.value(x) for w, f in zip(fw, f_pool)))

    x_star, certificate, residual_fn = None, "none", None
    try:
        mean = weighted_quadratic_mean(f_pool, fw)
    except UnsupportedComposite:
        logger.info("function pool is not quadratic; no reference solution")
    else:
        x_star = projected_gradient_oracle(mean, region).point
        certificate = "kkt_residual"
        residual_fn = lambda x: kkt_residual(mean, region, x)  # noqa: E731
    return ProblemInstance(ProblemKind.CONSTRAINED_PROGRAM, family, x_star, certificate, residual_fn,
                           objective=objective, feasible_set=region, constraint_sets=sets)


def build_saddle(pool: Sequence[SaddleBilinear], weights: Optional[Sequence[float]] = None) -> ProblemInstance:
    """
    Saddle points of the mean convex-concave quadratic.

    Raises:
        SingularMean: the mean saddle map is singular.
    """
    pool = list(pool)
    if not pool or not all(isinstance(m, SaddleBilinear) for m in pool):
        raise InvalidProblem("saddle pool must contain saddle_bilinear operators")
    if len({(m.dx, m.dy) for m in pool}) != 1:
        raise DimensionMismatch("saddle pool members disagree on (dx, dy)")
    family = RandomFamily(tuple(pool), _weights(len(pool), weights, "weights"))
    t_bar, offset = family.mean_linear_part()
    z_star = mean_linear_solution(t_bar, offset).point
    dx = pool[0].dx
    return ProblemInstance(ProblemKind.SADDLE, family, z_star, "mean_residual", _mean_residual(family),
                           modulus=max(min_sym_eigenvalue(t_bar), 0.0),
                           gap_fn=lambda z: primal_dual_gap(t_bar, offset, dx, z),
                           selection=family.zero_certificate(z_star))


def build_strongly_monotone(pool: Sequence[BaseOperator], weights: Optional[Sequence[float]] = None) -> ProblemInstance:
    """
    Affine pool whose mean is strongly monotone; the iterates themselves converge.

    Raises:
        InvalidProblem: the mean modulus is not positive.
    """
    pool = list(pool)
    family = RandomFamily(tuple(pool), _weights(len(pool), weights, "weights"))
    t_bar, offset = family.mean_linear_part()
    alpha = min_sym_eigenvalue(t_bar)
    if alpha <= PSD_TOLERANCE:
        raise InvalidProblem(f"mean operator is not strongly monotone (modulus {alpha:.3e})")
    x_star = mean_linear_solution(t_bar, offset).point
    return ProblemInstance(ProblemKind.STRONGLY_MONOTONE, family, x_star, "mean_residual", _mean_residual(family),
                           strong_convergence=True, modulus=alpha, selection=family.zero_certificate(x_star))


def build_variational_inequality(operator: AffineMonotone, sets: Sequence[ConvexSet], p0: float,
                                 set_weights: Optional[Sequence[float]] = None) -> ProblemInstance:
    """
    Finds x in X with <F(x), y - x> >= 0 for all y in X, F affine.

    Steps apply the resolvent of F with probability p0 and a projection onto
    a sampled X_i otherwise.
    """
    if not 0.0 < p0 < 1.0:
        raise InvalidProblem(f"p0 must lie in (0, 1), got {p0}")
    sets = _flatten_sets(sets)
    sw = _weights(len(sets), set_weights, "set weights")
    members = [operator] + [NormalCone(s) for s in sets]
    family = RandomFamily(tuple(members), np.concatenate([[p0], (1.0 - p0) * sw]))
    region = _region(sets)
    m, b = operator.linear_part()
    x_star = projection_fixed_point_oracle(m, b, region).point
    return ProblemInstance(ProblemKind.VARIATIONAL_INEQUALITY, family, x_star, "natural_residual",
                           lambda x: natural_residual(m, b, region, x), feasible_set=region,
                           modulus=max(min_sym_eigenvalue(m), 0.0), constraint_sets=sets)


def random_quadratic_pool(seed: int, size: int, dim: int, center=None, spread: float = 0.1) -> List[Quadratic]:
    """
    Quadratics 0.5 (x - m_s)^T Q_s (x - m_s) (up to constants) with Q_s >= I.

    Minimizers m_s scatter around `center` (a random point when omitted).
    """
    rng = np.random.default_rng(seed)
    center = rng.standard_normal(dim) if center is None else as_vector(center, dim=dim, name="center")
    pool = []
    for _ in range(size):
        b_mat = rng.standard_normal((dim, dim)) / np.sqrt(dim)
        q = np.eye(dim) + spread * b_mat @ b_mat.T
        m = center + spread * rng.standard_normal(dim)
        pool.append(Quadratic(q, -q @ m))
    return pool


def random_affine_pool(seed: int, size: int, dim: int, alpha: float = 0.5, spread: float = 0.1) -> List[AffineMonotone]:
    """Affine maps alpha*I + skew + PSD noise, so every member has modulus >= alpha."""
    if alpha <= 0.0:
        raise InvalidProblem("alpha must be positive")
    rng = np.random.default_rng(seed)
    base = rng.standard_normal(dim)
    pool = []
    for _ in range(size):
        s = rng.standard_normal((dim, dim))
        b_mat = rng.standard_normal((dim, dim)) / np.sqrt(dim)
        m = alpha * np.eye(dim) + spread * (s - s.T) + spread * b_mat @ b_mat.T
        pool.append(AffineMonotone(m, base + spread * rng.standard_normal(dim)))
    return pool


def random_saddle_pool(seed: int, size: int, dx: int, dy: int, spread: float = 0.1) -> List[SaddleBilinear]:
    """Saddle maps with P_s, R_s >= I and couplings K_s scattered around a common K."""
    rng = np.random.default_rng(seed)
    k0 = rng.standard_normal((dx, dy))
    c0, d0 = rng.standard_normal(dx), rng.standard_normal(dy)
    pool = []
    for _ in range(size):
        bp = rng.standard_normal((dx, dx)) / np.sqrt(dx)
        br = rng.standard_normal((dy, dy)) / np.sqrt(dy)
        pool.append(SaddleBilinear(
            np.eye(dx) + spread * bp @ bp.T,
            np.eye(dy) + spread * br @ br.T,
            k0 + spread * rng.standard_normal((dx, dy)),
            c0 + spread * rng.standard_normal(dx),
            d0 + spread * rng.standard_normal(dy),
        ))
    return pool
