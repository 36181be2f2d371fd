"""
Affine monotone operators A(x) = Mx + b.
"""

from dataclasses import dataclass

import numpy as np

from models.enums import OperatorKind
from models.numerics import as_matrix, as_vector, frozen, require_psd, solve_shifted, spectral_norm
from models.operators.base import BaseOperator
from models.sets import FullSpace


@dataclass(frozen=True, eq=False)
class AffineMonotone(BaseOperator):
    """
    Single-valued affine operator with sym(M) positive semidefinite.

    The pi/2 rotation of the plane is the skew member M = [[0, -1], [1, 0]]:
    monotone but with no strict decrease along the plain iteration.
    """
    M: np.ndarray
    b: np.ndarray
    kind = OperatorKind.AFFINE

    def __post_init__(self):
        b = as_vector(self.b, name="b")
        m = as_matrix(self.M, shape=(b.size, b.size), name="M")
        modulus = require_psd(m, "M")
        object.__setattr__(self, "M", frozen(m))
        object.__setattr__(self, "b", frozen(b))
        object.__setattr__(self, "modulus", max(modulus, 0.0))
        object.__setattr__(self, "_m_norm", spectral_norm(m))

    @classmethod
    def rotation_2d(cls) -> "AffineMonotone":
        return cls(np.array([[0.0, -1.0], [1.0, 0.0]]), np.zeros(2))

    @classmethod
    def identity(cls, dim: int, shift=None) -> "AffineMonotone":
        b = np.zeros(dim) if shift is None else -as_vector(shift, dim=dim)
        return cls(np.eye(dim), b)

    @property
    def dim(self) -> int:
        return self.b.size

    def resolvent(self, lam, x):
        return solve_shifted(self.M, lam, x - lam * self.b, self._m_norm)

    def least_norm(self, x):
        return self.M @ x + self.b

    def value_at(self, x):
        return self.M @ x + self.b

    def domain(self):
        return FullSpace(self.dim)

    def linear_part(self):
        return self.M, self.b
