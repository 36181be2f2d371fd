"""
Problem instances: a random family plus what is known about its solution.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from models.enums import ProblemKind
from models.errors import CertificateError
from models.numerics import as_vector
from models.random_family import RandomFamily, ZeroCertificate
from models.sets import ConvexSet

logger = logging.getLogger(__name__)

CERTIFICATE_TOLERANCE = 1e-9


@dataclass(eq=False)
class ProblemInstance:
    """
    A random operator family together with its reference data.

    Attributes:
        kind: Application family the instance was built from.
        family: The random family the iteration samples from.
        known_solution: x*, when an oracle or the caller supplied one.
        certificate: Name of the residual used to certify x*.
        residual_fn: Maps a point to its certificate residual.
        objective: F, for constrained programs.
        feasible_set: The constraint set (possibly an intersection).
        strong_convergence: True when the pointwise iterate is expected to converge.
        modulus: Strong-monotonicity modulus of the mean operator, if affine.
        gap_fn: Primal-dual gap of a point, for saddle instances.
        selection: The constructed square-summable selection at x*.
        constraint_sets: Member sets, for the linear regularity witness.
    """
    kind: ProblemKind
    family: RandomFamily
    known_solution: Optional[np.ndarray] = None
    certificate: str = "none"
    residual_fn: Optional[Callable[[np.ndarray], float]] = None
    objective: Optional[Callable[[np.ndarray], float]] = None
    feasible_set: Optional[ConvexSet] = None
    strong_convergence: bool = False
    modulus: Optional[float] = None
    gap_fn: Optional[Callable[[np.ndarray], Optional[float]]] = None
    selection: Optional[ZeroCertificate] = None
    constraint_sets: List[ConvexSet] = field(default_factory=list)
    residual: Optional[float] = None

    def __post_init__(self):
        if self.known_solution is not None:
            self.known_solution = as_vector(self.known_solution, dim=self.family.dim, name="known_solution")
            self.residual = self.verify()

    @property
    def dim(self) -> int:
        return self.family.dim

    def verify(self) -> float:
        """
        Re-evaluates the certificate of the known solution.

        Raises:
            CertificateError: the residual exceeds CERTIFICATE_TOLERANCE.
        """
        if self.known_solution is None or self.residual_fn is None:
            return 0.0
        residual = float(self.residual_fn(self.known_solution))
        if not np.isfinite(residual) or residual > CERTIFICATE_TOLERANCE:
            raise CertificateError(
                f"{self.kind.value}: {self.certificate} residual {residual:.3e} exceeds {CERTIFICATE_TOLERANCE:g}"
            )
        logger.debug("%s certificate %s = %.3e", self.kind.value, self.certificate, residual)
        return residual
