"""
Positive rescaling of a catalog operator.
"""

from dataclasses import dataclass

import numpy as np

from models.enums import OperatorKind
from models.errors import InvalidProblem
from models.operators.base import BaseOperator


@dataclass(frozen=True, eq=False)
class Scaled(BaseOperator):
    """alpha * A; its resolvent at step lam is that of A at step alpha*lam."""
    alpha: float
    inner: BaseOperator
    kind = OperatorKind.SCALED

    def __post_init__(self):
        alpha = float(self.alpha)
        if not np.isfinite(alpha) or alpha <= 0.0:
            raise InvalidProblem("scale factor must be positive")
        object.__setattr__(self, "alpha", alpha)

    @property
    def dim(self) -> int:
        return self.inner.dim

    def resolvent(self, lam, x):
        return self.inner.resolvent(self.alpha * lam, x)

    def least_norm(self, x):
        return self.alpha * self.inner.least_norm(x)

    def value_at(self, x):
        return self.alpha * self.inner.value_at(x)

    def domain(self):
        return self.inner.domain()

    def linear_part(self):
        t, offset = self.inner.linear_part()
        return self.alpha * t, self.alpha * offset
