"""
Finite-support random operator families and their sample streams.

A RandomFamily is the map i -> A(i, .) together with the sampling law w.
For finite support the mean operator is the weighted sum of the members and
the essential intersection of the domains is their plain intersection.
"""

import logging
from bisect import bisect_right
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from models.errors import DimensionMismatch, InvalidProblem
from models.numerics import as_vector, frozen
from models.operators.base import BaseOperator
from models.sets import ConvexSet, FullSpace, Intersection

logger = logging.getLogger(__name__)

WEIGHT_SUM_TOLERANCE = 1e-12


class SampleStream:
    """
    Counter-tracked i.i.d. uniform source for categorical draws.

    Streams are seeded through numpy's SeedSequence, so (seed, replica)
    pairs give independent, reproducible PCG64 streams.
    """

    def __init__(self, seed: int, replica: Optional[int] = None):
        if seed < 0 or (replica is not None and replica < 0):
            raise InvalidProblem("seeds and replica ids must be nonnegative")
        self.seed = int(seed)
        self.replica = replica
        entropy = self.seed if replica is None else [self.seed, int(replica)]
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
        self.counter = 0

    @classmethod
    def for_replica(cls, master_seed: int, replica_id: int) -> "SampleStream":
        return cls(master_seed, replica_id)

    def uniform(self) -> float:
        """One U[0, 1) draw; advances the counter by exactly one."""
        self.counter += 1
        return self._rng.random()


@dataclass(frozen=True)
class ZeroCertificate:
    """Square-summable selection phi(i) = A(i, x*) whose weighted mean vanishes."""
    selection: Tuple[np.ndarray, ...]
    residual: float
    second_moment: float


@dataclass(frozen=True, eq=False)
class RandomFamily:
    """
    Members A(i, .) with sampling weights w_i > 0 summing to one.

    Attributes:
        members: Operators sharing one dimension.
        weights: Sampling probabilities.
        common_domain: True when every member is defined on the whole space.
    """
    members: Tuple[BaseOperator, ...]
    weights: np.ndarray

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise InvalidProblem("a random family needs at least one member")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatch(f"family members disagree on dimension: {sorted(dims)}")
        w = as_vector(self.weights, dim=len(members), name="weights")
        if np.any(w <= 0.0):
            raise InvalidProblem("family weights must be strictly positive")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise InvalidProblem(f"family weights sum to {w.sum():.15g}, expected 1")
        cumulative = np.cumsum(w).tolist()
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "weights", frozen(w))
        object.__setattr__(self, "_cumulative", cumulative)
        object.__setattr__(self, "common_domain",
                           all(isinstance(m.domain(), FullSpace) for m in members))

    @classmethod
    def normalized(cls, members: Sequence[BaseOperator], weights: Optional[Sequence[float]] = None) -> "RandomFamily":
        """Builds a family after rescaling positive weights to sum to one."""
        if weights is None:
            w = np.full(len(members), 1.0 / len(members))
        else:
            w = as_vector(weights, dim=len(members), name="weights")
            if np.any(w <= 0.0):
                raise InvalidProblem("family weights must be strictly positive")
            w = w / w.sum()
        return cls(tuple(members), w)

    @property
    def dim(self) -> int:
        return self.members[0].dim

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def is_affine(self) -> bool:
        """True when every member has a linear part, so the mean operator is affine."""
        return all(m.is_affine for m in self.members)

    def sample(self, stream: SampleStream) -> int:
        """Draws a member index (0-based) with probability w_i from one uniform."""
        i = bisect_right(self._cumulative, stream.uniform())
        return min(i, len(self.members) - 1)

    def mean_apply(self, x) -> np.ndarray:
        """
        Evaluates the mean operator sum_i w_i A(i, x).

        Raises:
            DomainError: x lies outside the domain of some member.
            SetValuedAt: some member is multi-valued at x.
        """
        x = as_vector(x, dim=self.dim)
        out = np.zeros(self.dim)
        for w, m in zip(self.weights, self.members):
            out += w * m.value_at(x)
        return out

    def common_zero_check(self, x, tol: float) -> bool:
        """True iff x is (up to tol) a fixed point of every member's resolvent."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.dim or not np.all(np.isfinite(x)):
            return False
        return all(float(np.linalg.norm(m.yosida(1.0, x))) <= tol for m in self.members)

    def essential_domain(self) -> ConvexSet:
        """Intersection of member domains, simplified to a closed-form set where possible."""
        domains = [m.domain() for m in self.members if not isinstance(m.domain(), FullSpace)]
        if not domains:
            return FullSpace(self.dim)
        return Intersection(tuple(domains)).simplified()

    def mean_linear_part(self) -> Tuple[np.ndarray, np.ndarray]:
        """Weighted average (T, t) of affine members; UnsupportedComposite otherwise."""
        t_bar = np.zeros((self.dim, self.dim))
        off_bar = np.zeros(self.dim)
        for w, m in zip(self.weights, self.members):
            t, off = m.linear_part()
            t_bar += w * t
            off_bar += w * off
        return t_bar, off_bar

    def zero_certificate(self, x_star) -> ZeroCertificate:
        """
        Constructs the selection phi(i) = A(i, x*) for single-valued members.

        Its weighted mean is the mean residual and its second moment is the
        constant sum_i w_i ||A(i, x*)||^2 used by the stability diagnostics.
        """
        x_star = as_vector(x_star, dim=self.dim)
        selection = tuple(m.value_at(x_star) for m in self.members)
        mean = sum(w * phi for w, phi in zip(self.weights, selection))
        second = float(sum(w * float(phi @ phi) for w, phi in zip(self.weights, selection)))
        return ZeroCertificate(selection, float(np.linalg.norm(mean)), second)
