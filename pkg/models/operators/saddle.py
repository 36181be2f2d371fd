"""
Monotone operator of a convex-concave quadratic saddle function.
"""

from dataclasses import dataclass

import numpy as np

from models.enums import OperatorKind
from models.errors import DimensionMismatch
from models.numerics import as_matrix, as_vector, frozen, require_psd, solve_shifted, spectral_norm
from models.operators.base import BaseOperator
from models.sets import FullSpace


@dataclass(frozen=True, eq=False)
class SaddleBilinear(BaseOperator):
    """
    A(x, y) = (P x + K y + c, R y - K^T x + d) on R^{dx+dy}.

    This is (grad_x L, -grad_y L) for
    L(x, y) = 0.5 x^T P x + x^T K y - 0.5 y^T R y + c^T x - d^T y,
    so its zeros are the saddle points of L.
    """
    P: np.ndarray
    R: np.ndarray
    K: np.ndarray
    c: np.ndarray
    d: np.ndarray
    kind = OperatorKind.SADDLE_BILINEAR

    def __post_init__(self):
        c = as_vector(self.c, name="c")
        d = as_vector(self.d, name="d")
        dx, dy = c.size, d.size
        p = as_matrix(self.P, shape=(dx, dx), name="P")
        r = as_matrix(self.R, shape=(dy, dy), name="R")
        k = as_matrix(self.K, name="K")
        if k.shape != (dx, dy):
            raise DimensionMismatch(f"K has shape {k.shape}, expected {(dx, dy)}")
        t = np.block([[p, k], [-k.T, r]])
        # K cancels in sym(T), so this certifies P and R
        modulus = require_psd(t, "saddle map")
        for name, value in (("P", p), ("R", r), ("K", k), ("c", c), ("d", d)):
            object.__setattr__(self, name, frozen(value))
        object.__setattr__(self, "T", frozen(t))
        object.__setattr__(self, "offset", frozen(np.concatenate([c, d])))
        object.__setattr__(self, "modulus", max(modulus, 0.0))
        object.__setattr__(self, "_t_norm", spectral_norm(t))

    @property
    def dx(self) -> int:
        return self.c.size

    @property
    def dy(self) -> int:
        return self.d.size

    @property
    def dim(self) -> int:
        return self.dx + self.dy

    def resolvent(self, lam, x):
        return solve_shifted(self.T, lam, x - lam * self.offset, self._t_norm)

    def least_norm(self, x):
        return self.T @ x + self.offset

    def value_at(self, x):
        return self.T @ x + self.offset

    def domain(self):
        return FullSpace(self.dim)

    def linear_part(self):
        return self.T, self.offset
