"""
Numerical helpers shared by the operator catalog and the oracles.

Vectors are plain one-dimensional float64 numpy arrays. The helpers here
coerce user input, enforce finiteness and dimension agreement, certify
positive semidefiniteness and wrap dense linear solves.
"""

import logging
from typing import Optional, Sequence, Union

import numpy as np
from scipy import linalg

from models.errors import DimensionMismatch, NonFiniteValue, NotMonotone, SingularSystem

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-10
CONDITION_WARNING = 1e12
CONTAINMENT_TOLERANCE = 1e-10

ArrayLike = Union[Sequence[float], np.ndarray, float]


def as_vector(x: ArrayLike, dim: Optional[int] = None, name: str = "x") -> np.ndarray:
    """
    Coerces input into a finite float64 vector.

    Args:
        x: Sequence of numbers (a scalar is promoted to a 1-vector).
        dim: Expected dimension, checked when given.
        name: Label used in error messages.

    Returns:
        np.ndarray: A fresh one-dimensional array.
    """
    v = np.array(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise DimensionMismatch(f"{name} must have at least one coordinate")
    if not np.all(np.isfinite(v)):
        raise NonFiniteValue(f"{name} has non-finite entries")
    if dim is not None and v.size != dim:
        raise DimensionMismatch(f"{name} has dimension {v.size}, expected {dim}")
    return v


def as_matrix(m: ArrayLike, shape: Optional[tuple] = None, name: str = "M") -> np.ndarray:
    """Coerces input into a finite 2-D float64 array."""
    a = np.array(m, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be a matrix")
    if not np.all(np.isfinite(a)):
        raise NonFiniteValue(f"{name} has non-finite entries")
    if shape is not None and a.shape != tuple(shape):
        raise DimensionMismatch(f"{name} has shape {a.shape}, expected {tuple(shape)}")
    return a


def frozen(a: np.ndarray) -> np.ndarray:
    """Marks an array read-only so shared specs stay immutable."""
    a.setflags(write=False)
    return a


def check_dim(x: np.ndarray, dim: int, name: str = "x") -> None:
    if x.shape != (dim,):
        raise DimensionMismatch(f"{name} has shape {x.shape}, expected ({dim},)")


def sym(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def min_sym_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetric part of a square matrix."""
    return float(linalg.eigvalsh(sym(m))[0])


def require_psd(m: np.ndarray, name: str = "M") -> float:
    """
    Certifies that sym(m) is positive semidefinite up to PSD_TOLERANCE.

    Returns:
        float: The smallest eigenvalue of the symmetric part.
    """
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {m.shape}")
    lam_min = min_sym_eigenvalue(m)
    if lam_min < -PSD_TOLERANCE:
        raise NotMonotone(f"{name}: symmetric part has eigenvalue {lam_min:.3e} < 0")
    return lam_min


def spectral_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def solve_shifted(m: np.ndarray, lam: float, rhs: np.ndarray, m_norm: Optional[float] = None) -> np.ndarray:
    """
    Solves (I + lam*M) y = rhs.

    For monotone M every singular value of I + lam*M is at least one, so the
    condition number is bounded by 1 + lam*||M||; a warning is logged above
    CONDITION_WARNING.
    """
    if m_norm is not None and 1.0 + lam * m_norm > CONDITION_WARNING:
        logger.warning("resolvent system condition bound %.3e exceeds %.0e",
                       1.0 + lam * m_norm, CONDITION_WARNING)
    system = lam * m
    system.flat[::system.shape[0] + 1] += 1.0
    try:
        y = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"resolvent solve failed for lambda={lam:g}") from exc
    if not np.all(np.isfinite(y)):
        raise SingularSystem(f"resolvent solve produced non-finite values for lambda={lam:g}")
    return y


def solve_dense(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """General dense solve with a condition warning, used by the oracles."""
    cond = np.linalg.cond(a)
    if not np.isfinite(cond):
        raise SingularSystem("matrix is singular")
    if cond > CONDITION_WARNING:
        logger.warning("dense solve with condition number %.3e", cond)
    try:
        lu, piv = linalg.lu_factor(a)
        return linalg.lu_solve((lu, piv), rhs)
    except (linalg.LinAlgError, ValueError) as exc:
        raise SingularSystem(str(exc)) from exc
