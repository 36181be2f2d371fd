"""
Checked entry points for resolvents, Yosida approximations and proximity maps.

These wrap the unchecked methods of the catalog classes with step and
dimension validation. Inner loops call the methods directly.
"""

import numpy as np

from models.errors import InvalidProblem
from models.functions import ConvexFn
from models.numerics import ArrayLike, as_vector
from models.operators.base import BaseOperator
from models.sets import ConvexSet, project as project_onto


def _check_step(lam) -> float:
    lam = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(lam)) or np.any(lam <= 0.0):
        raise InvalidProblem(f"step must be positive and finite, got {lam}")
    return float(lam) if lam.ndim == 0 else lam


def resolvent(op: BaseOperator, lam: float, x: ArrayLike) -> np.ndarray:
    """(I + lam*A)^{-1}(x)."""
    return op.resolvent(_check_step(lam), as_vector(x, dim=op.dim))


def yosida(op: BaseOperator, lam: float, x: ArrayLike) -> np.ndarray:
    """(x - J_lam(x)) / lam, a (1/lam)-Lipschitz single-valued surrogate of A."""
    return op.yosida(_check_step(lam), as_vector(x, dim=op.dim))


def least_norm(op: BaseOperator, x: ArrayLike) -> np.ndarray:
    return op.least_norm(as_vector(x, dim=op.dim))


def domain_projection(op: BaseOperator, x: ArrayLike) -> np.ndarray:
    """Projection onto the closure of dom A; the identity for full-domain operators."""
    return op.domain_projection(as_vector(x, dim=op.dim))


def prox(f: ConvexFn, lam: float, x: ArrayLike) -> np.ndarray:
    """argmin_t lam*f(t) + 0.5*||t - x||^2."""
    return f.prox(_check_step(lam), as_vector(x, dim=f.dim))


def project(convex_set: ConvexSet, x: ArrayLike) -> np.ndarray:
    return project_onto(convex_set, x)
