"""
Subdifferentials of catalog convex functions and normal cones of catalog sets.
"""

from dataclasses import dataclass

import numpy as np

from models.enums import OperatorKind
from models.errors import DomainError, SetValuedAt, UnsupportedSet
from models.functions import ConvexFn
from models.operators.base import BaseOperator
from models.sets import ConvexSet, Intersection


@dataclass(frozen=True, eq=False)
class Subdifferential(BaseOperator):
    """A = df; the resolvent is the proximity operator of f."""
    f: ConvexFn
    kind = OperatorKind.SUBDIFFERENTIAL

    @property
    def dim(self) -> int:
        return self.f.dim

    def resolvent(self, lam, x):
        return self.f.prox(lam, x)

    def least_norm(self, x):
        return self.f.least_norm(x)

    def value_at(self, x):
        return self.f.gradient(x)

    def domain(self):
        return self.f.domain()

    def linear_part(self):
        # smooth quadratic pieces are affine gradients
        q, b, _ = self.f.quadratic_form()
        return q, b


@dataclass(frozen=True, eq=False)
class NormalCone(BaseOperator):
    """A = N_C; the resolvent is the projection onto C for every step."""
    set: ConvexSet
    kind = OperatorKind.NORMAL_CONE

    def __post_init__(self):
        if isinstance(self.set, Intersection):
            raise UnsupportedSet("normal cone of an intersection has no closed-form resolvent")

    @property
    def dim(self) -> int:
        return self.set.dim

    def resolvent(self, lam, x):
        return self.set.project(x)

    def least_norm(self, x):
        if not self.set.contains(x):
            raise DomainError("point lies outside the set")
        return np.zeros(self.dim)

    def value_at(self, x):
        if not self.set.contains(x):
            raise DomainError("point lies outside the set")
        if not self.set.is_interior(x):
            raise SetValuedAt("normal cone at a boundary point is a cone, not a point")
        return np.zeros(self.dim)

    def domain(self):
        return self.set
