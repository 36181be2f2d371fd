"""
Base interface for maximal monotone operators.
"""

from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np

from models.enums import OperatorKind
from models.errors import UnsupportedComposite
from models.sets import ConvexSet


class BaseOperator(ABC):
    """
    Abstract Base Class for every operator in the catalog.

    Any new operator must inherit from this class and provide an exact
    resolvent. Instances are immutable, so a single operator can be shared
    by concurrent replicas.
    """

    kind: OperatorKind

    @property
    @abstractmethod
    def dim(self) -> int:
        """Ambient dimension."""

    @abstractmethod
    def resolvent(self, lam: float, x: np.ndarray) -> np.ndarray:
        """
        Evaluates (I + lam*A)^{-1}(x) without input validation.

        Args:
            lam: Positive step.
            x: Point of matching dimension.

        Returns:
            np.ndarray: The unique y with (x - y)/lam in A(y).
        """

    @abstractmethod
    def least_norm(self, x: np.ndarray) -> np.ndarray:
        """Element of least norm in A(x); DomainError outside dom A."""

    @abstractmethod
    def value_at(self, x: np.ndarray) -> np.ndarray:
        """The single element of A(x); SetValuedAt where A(x) is not a singleton."""

    @abstractmethod
    def domain(self) -> ConvexSet:
        """Closure of dom A as a catalog set (FullSpace when A is everywhere defined)."""

    def yosida(self, lam: float, x: np.ndarray) -> np.ndarray:
        return (x - self.resolvent(lam, x)) / lam

    def domain_projection(self, x: np.ndarray) -> np.ndarray:
        return self.domain().project(x)

    def linear_part(self) -> Tuple[np.ndarray, np.ndarray]:
        """(T, t) with A(x) = T x + t, for affine operators only."""
        raise UnsupportedComposite(f"{self.kind.value} operator is not affine")

    @property
    def is_affine(self) -> bool:
        try:
            self.linear_part()
        except UnsupportedComposite:
            return False
        return True
