"""
Closed convex sets with exact projections.

Each concrete set knows how to project onto itself, test membership, decide
whether a point is interior and project a vector onto its normal cone at a
boundary point. Intersections are containers only; their projection is the
job of the Dykstra oracle in models.problems.oracles.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from models.enums import SetKind
from models.errors import DimensionMismatch, EmptyIntersection, InvalidProblem, UnsupportedSet
from models.numerics import CONTAINMENT_TOLERANCE, as_vector, check_dim, frozen


class ConvexSet(ABC):
    """
    Abstract base for the set catalog.

    Implementations are immutable; every method is a pure function of its
    arguments.
    """

    kind: SetKind

    @property
    @abstractmethod
    def dim(self) -> int:
        """Ambient dimension."""

    @abstractmethod
    def project(self, x: np.ndarray) -> np.ndarray:
        """Nearest point of the set."""

    @abstractmethod
    def contains(self, x: np.ndarray, tol: float = CONTAINMENT_TOLERANCE) -> bool:
        """Membership up to a scaled tolerance."""

    @abstractmethod
    def is_interior(self, x: np.ndarray) -> bool:
        """True when the normal cone at x reduces to {0}."""

    @abstractmethod
    def normal_cone_projection(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Projection of v onto the normal cone of the set at x (x in the set)."""

    @abstractmethod
    def translated(self, shift: np.ndarray) -> "ConvexSet":
        """The set shifted by a vector."""

    def distance(self, x: np.ndarray) -> float:
        return float(np.linalg.norm(x - self.project(x)))


@dataclass(frozen=True, eq=False)
class FullSpace(ConvexSet):
    """The whole of R^d; domain of every single-valued catalog operator."""
    size: int
    kind = SetKind.FULL_SPACE

    def __post_init__(self):
        if self.size < 1:
            raise DimensionMismatch("dimension must be at least 1")

    @property
    def dim(self) -> int:
        return self.size

    def project(self, x):
        check_dim(x, self.size)
        return x.copy()

    def contains(self, x, tol=CONTAINMENT_TOLERANCE):
        return True

    def is_interior(self, x):
        return True

    def normal_cone_projection(self, x, v):
        return np.zeros(self.size)

    def translated(self, shift):
        return self

    def distance(self, x):
        return 0.0


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    """Axis-aligned box lower <= x <= upper."""
    lower: np.ndarray
    upper: np.ndarray
    kind = SetKind.BOX

    def __post_init__(self):
        lower = as_vector(self.lower, name="lower")
        upper = as_vector(self.upper, dim=lower.size, name="upper")
        if np.any(lower > upper):
            raise InvalidProblem("box requires lower <= upper componentwise")
        object.__setattr__(self, "lower", frozen(lower))
        object.__setattr__(self, "upper", frozen(upper))

    @property
    def dim(self) -> int:
        return self.lower.size

    def project(self, x):
        check_dim(x, self.dim)
        return np.minimum(np.maximum(x, self.lower), self.upper)

    def _tol(self, tol):
        return tol * (1.0 + np.maximum(np.abs(self.lower), np.abs(self.upper)))

    def contains(self, x, tol=CONTAINMENT_TOLERANCE):
        t = self._tol(tol)
        return bool(np.all(x >= self.lower - t) and np.all(x <= self.upper + t))

    def _active(self, x):
        t = self._tol(CONTAINMENT_TOLERANCE)
        return x <= self.lower + t, x >= self.upper - t

    def is_interior(self, x):
        at_lower, at_upper = self._active(x)
        return not bool(np.any(at_lower) or np.any(at_upper))

    def normal_cone_projection(self, x, v):
        at_lower, at_upper = self._active(x)
        out = np.zeros_like(v)
        both = at_lower & at_upper
        out[at_lower] = np.minimum(v[at_lower], 0.0)
        out[at_upper] = np.maximum(v[at_upper], 0.0)
        out[both] = v[both]
        return out

    def translated(self, shift):
        return Box(self.lower + shift, self.upper + shift)


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexSet):
    """Closed halfspace a^T x <= c."""
    normal: np.ndarray
    offset: float
    kind = SetKind.HALFSPACE

    def __post_init__(self):
        a = as_vector(self.normal, name="normal")
        norm_sq = float(a @ a)
        if norm_sq <= 0.0:
            raise InvalidProblem("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", frozen(a))
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "_norm_sq", norm_sq)

    @property
    def dim(self) -> int:
        return self.normal.size

    def _slack(self, x):
        return float(self.normal @ x) - self.offset

    def _scaled_tol(self, x, tol):
        return tol * (1.0 + abs(self.offset) + np.sqrt(self._norm_sq) * float(np.linalg.norm(x)))

    def project(self, x):
        check_dim(x, self.dim)
        s = self._slack(x)
        if s <= 0.0:
            return x.copy()
        return x - (s / self._norm_sq) * self.normal

    def contains(self, x, tol=CONTAINMENT_TOLERANCE):
        return self._slack(x) <= self._scaled_tol(x, tol)

    def is_interior(self, x):
        return self._slack(x) < -self._scaled_tol(x, CONTAINMENT_TOLERANCE)

    def normal_cone_projection(self, x, v):
        if self.is_interior(x):
            return np.zeros_like(v)
        return max(0.0, float(self.normal @ v)) / self._norm_sq * self.normal

    def translated(self, shift):
        return Halfspace(self.normal, self.offset + float(self.normal @ shift))


@dataclass(frozen=True, eq=False)
class Hyperplane(ConvexSet):
    """Affine hyperplane a^T x = c."""
    normal: np.ndarray
    offset: float
    kind = SetKind.HYPERPLANE

    def __post_init__(self):
        a = as_vector(self.normal, name="normal")
        norm_sq = float(a @ a)
        if norm_sq <= 0.0:
            raise InvalidProblem("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", frozen(a))
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "_norm_sq", norm_sq)

    @property
    def dim(self) -> int:
        return self.normal.size

    def project(self, x):
        check_dim(x, self.dim)
        s = float(self.normal @ x) - self.offset
        return x - (s / self._norm_sq) * self.normal

    def contains(self, x, tol=CONTAINMENT_TOLERANCE):
        s = abs(float(self.normal @ x) - self.offset)
        return s <= tol * (1.0 + abs(self.offset) + np.sqrt(self._norm_sq) * float(np.linalg.norm(x)))

    def is_interior(self, x):
        return False

    def normal_cone_projection(self, x, v):
        return float(self.normal @ v) / self._norm_sq * self.normal

    def translated(self, shift):
        return Hyperplane(self.normal, self.offset + float(self.normal @ shift))


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    """Closed Euclidean ball."""
    center: np.ndarray
    radius: float
    kind = SetKind.BALL

    def __post_init__(self):
        c = as_vector(self.center, name="center")
        r = float(self.radius)
        if not np.isfinite(r) or r <= 0.0:
            raise InvalidProblem("ball radius must be positive")
        object.__setattr__(self, "center", frozen(c))
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size

    def project(self, x):
        check_dim(x, self.dim)
        offset = x - self.center
        dist = float(np.linalg.norm(offset))
        if dist <= self.radius:
            return x.copy()
        return self.center + (self.radius / dist) * offset

    def contains(self, x, tol=CONTAINMENT_TOLERANCE):
        return float(np.linalg.norm(x - self.center)) <= self.radius + tol * (1.0 + self.radius)

    def is_interior(self, x):
        return float(np.linalg.norm(x - self.center)) < self.radius - CONTAINMENT_TOLERANCE * (1.0 + self.radius)

    def normal_cone_projection(self, x, v):
        if self.is_interior(x):
            return np.zeros_like(v)
        n = x - self.center
        return max(0.0, float(n @ v)) / float(n @ n) * n

    def translated(self, shift):
        return Ball(self.center + shift, self.radius)


@dataclass(frozen=True, eq=False)
class Intersection(ConvexSet):
    """Finite intersection of catalog sets (no closed-form projection)."""
    members: Tuple[ConvexSet, ...]
    kind = SetKind.INTERSECTION

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise InvalidProblem("intersection needs at least one member")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatch(f"intersection members disagree on dimension: {sorted(dims)}")
        object.__setattr__(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def project(self, x):
        raise UnsupportedSet("an intersection has no closed-form projection; use dykstra_project")

    def contains(self, x, tol=CONTAINMENT_TOLERANCE):
        return all(m.contains(x, tol) for m in self.members)

    def is_interior(self, x):
        return all(m.is_interior(x) for m in self.members)

    def normal_cone_projection(self, x, v):
        raise UnsupportedSet("normal cone of a general intersection is not represented")

    def translated(self, shift):
        return Intersection(tuple(m.translated(shift) for m in self.members))

    def distance(self, x):
        raise UnsupportedSet("use dykstra_project for the distance to an intersection")

    def flatten(self) -> List[ConvexSet]:
        out: List[ConvexSet] = []
        for m in self.members:
            out.extend(m.flatten() if isinstance(m, Intersection) else [m])
        return out

    def simplified(self) -> ConvexSet:
        """
        Drops full-space members and merges boxes into one box.

        Returns a single closed-form set whenever possible so that callers
        can skip the iterative oracle.
        """
        box = None
        rest: List[ConvexSet] = []
        for m in self.flatten():
            if isinstance(m, FullSpace):
                continue
            if isinstance(m, Box):
                if box is None:
                    box = m
                else:
                    lower = np.maximum(box.lower, m.lower)
                    upper = np.minimum(box.upper, m.upper)
                    if np.any(lower > upper):
                        raise EmptyIntersection("box merge", 0, float(np.max(lower - upper)))
                    box = Box(lower, upper)
            else:
                rest.append(m)
        parts = ([box] if box is not None else []) + rest
        if not parts:
            return FullSpace(self.dim)
        if len(parts) == 1:
            return parts[0]
        return Intersection(tuple(parts))


def project(convex_set: ConvexSet, x) -> np.ndarray:
    """Exact projection onto a non-intersection catalog set."""
    if isinstance(convex_set, Intersection):
        raise UnsupportedSet("project() does not accept intersections; use dykstra_project")
    return convex_set.project(as_vector(x, dim=convex_set.dim))
