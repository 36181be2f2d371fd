"""
Convex functions with closed-form proximity operators.

The catalog is deliberately small: quadratics, linear forms, weighted l1
norms, indicators of catalog sets, translates, and sums built from
"quadratics plus at most one simple nonsmooth term". Anything that would need
an iterative inner solver is rejected at construction time.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from models.enums import FunctionKind
from models.errors import DimensionMismatch, DomainError, SetValuedAt, UnsupportedComposite, UnsupportedSet
from models.numerics import as_matrix, as_vector, frozen, require_psd, sym
from models.sets import Box, ConvexSet, FullSpace, Intersection


class ConvexFn(ABC):
    """
    Abstract base for the function catalog.

    Subclasses implement `_prox`, whose step may be a scalar or, for
    separable functions, a vector of per-coordinate steps.
    """

    kind: FunctionKind
    is_smooth: bool = False
    is_separable: bool = False

    @property
    @abstractmethod
    def dim(self) -> int:
        """Ambient dimension."""

    @abstractmethod
    def value(self, x: np.ndarray) -> float:
        """Function value; +inf outside the domain."""

    @abstractmethod
    def _prox(self, tau, x: np.ndarray) -> np.ndarray:
        """Unchecked proximity operator."""

    @abstractmethod
    def _least_norm_plus(self, x: np.ndarray, g: np.ndarray) -> np.ndarray:
        """Least-norm element of g + (subdifferential at x)."""

    @abstractmethod
    def gradient(self, x: np.ndarray) -> np.ndarray:
        """The unique subgradient; raises SetValuedAt where there are several."""

    def domain(self) -> ConvexSet:
        return FullSpace(self.dim)

    def quadratic_form(self) -> Tuple[np.ndarray, np.ndarray, float]:
        """(Q, b, const) with f(x) = 0.5 x^T Q x + b^T x + const, smooth members only."""
        raise UnsupportedComposite(f"{self.kind.value} is not a quadratic form")

    def prox(self, lam: float, x: np.ndarray) -> np.ndarray:
        return self._prox(lam, x)

    def least_norm(self, x: np.ndarray) -> np.ndarray:
        return self._least_norm_plus(x, np.zeros(self.dim))


@dataclass(frozen=True, eq=False)
class Quadratic(ConvexFn):
    """0.5 x^T Q x + b^T x with Q symmetric positive semidefinite."""
    Q: np.ndarray
    b: np.ndarray
    kind = FunctionKind.QUADRATIC
    is_smooth = True

    def __post_init__(self):
        b = as_vector(self.b, name="b")
        q = as_matrix(self.Q, shape=(b.size, b.size), name="Q")
        require_psd(q, "Q")
        object.__setattr__(self, "Q", frozen(sym(q)))
        object.__setattr__(self, "b", frozen(b))

    @property
    def dim(self) -> int:
        return self.b.size

    def value(self, x):
        return float(0.5 * x @ self.Q @ x + self.b @ x)

    def _prox(self, tau, x):
        system = tau * self.Q
        system[np.diag_indices_from(system)] += 1.0
        return np.linalg.solve(system, x - tau * self.b)

    def gradient(self, x):
        return self.Q @ x + self.b

    def _least_norm_plus(self, x, g):
        return g + self.gradient(x)

    def quadratic_form(self):
        return self.Q, self.b, 0.0


@dataclass(frozen=True, eq=False)
class Linear(ConvexFn):
    """b^T x."""
    b: np.ndarray
    kind = FunctionKind.LINEAR
    is_smooth = True
    is_separable = True

    def __post_init__(self):
        object.__setattr__(self, "b", frozen(as_vector(self.b, name="b")))

    @property
    def dim(self) -> int:
        return self.b.size

    def value(self, x):
        return float(self.b @ x)

    def _prox(self, tau, x):
        return x - tau * self.b

    def gradient(self, x):
        return self.b.copy()

    def _least_norm_plus(self, x, g):
        return g + self.b

    def quadratic_form(self):
        return np.zeros((self.dim, self.dim)), self.b, 0.0


@dataclass(frozen=True, eq=False)
class WeightedL1(ConvexFn):
    """sum_i w_i |x_i| with w_i >= 0."""
    weights: np.ndarray
    kind = FunctionKind.WEIGHTED_L1
    is_separable = True

    def __post_init__(self):
        w = as_vector(self.weights, name="weights")
        if np.any(w < 0.0):
            raise UnsupportedComposite("weighted l1 requires nonnegative weights")
        object.__setattr__(self, "weights", frozen(w))

    @property
    def dim(self) -> int:
        return self.weights.size

    def value(self, x):
        return float(self.weights @ np.abs(x))

    def _prox(self, tau, x):
        # |x_i| == tau*w_i maps to exactly 0
        return np.sign(x) * np.maximum(np.abs(x) - tau * self.weights, 0.0)

    def gradient(self, x):
        if np.any((x == 0.0) & (self.weights > 0.0)):
            raise SetValuedAt("weighted l1 is not differentiable at a zero coordinate")
        return self.weights * np.sign(x)

    def _least_norm_plus(self, x, g):
        at_zero = x == 0.0
        out = g + self.weights * np.sign(x)
        gz = g[at_zero]
        out[at_zero] = np.sign(gz) * np.maximum(np.abs(gz) - self.weights[at_zero], 0.0)
        return out


@dataclass(frozen=True, eq=False)
class Indicator(ConvexFn):
    """0 on a catalog set, +inf elsewhere."""
    set: ConvexSet
    kind = FunctionKind.INDICATOR

    def __post_init__(self):
        if isinstance(self.set, Intersection):
            raise UnsupportedSet("indicator of an intersection has no closed-form prox")

    @property
    def is_separable(self) -> bool:
        return isinstance(self.set, (Box, FullSpace))

    @property
    def dim(self) -> int:
        return self.set.dim

    def domain(self):
        return self.set

    def value(self, x):
        return 0.0 if self.set.contains(x) else float("inf")

    def _prox(self, tau, x):
        return self.set.project(x)

    def gradient(self, x):
        if not self.set.contains(x):
            raise DomainError("point lies outside the indicator's set")
        if not self.set.is_interior(x):
            raise SetValuedAt("normal cone at a boundary point is not a singleton")
        return np.zeros(self.dim)

    def _least_norm_plus(self, x, g):
        if not self.set.contains(x):
            raise DomainError("point lies outside the indicator's set")
        return g + self.set.normal_cone_projection(x, -g)


@dataclass(frozen=True, eq=False)
class Translated(ConvexFn):
    """x -> inner(x - shift)."""
    inner: ConvexFn
    shift: np.ndarray
    kind = FunctionKind.TRANSLATE

    def __post_init__(self):
        object.__setattr__(self, "shift", frozen(as_vector(self.shift, dim=self.inner.dim, name="shift")))

    @property
    def is_smooth(self) -> bool:
        return self.inner.is_smooth

    @property
    def is_separable(self) -> bool:
        return self.inner.is_separable

    @property
    def dim(self) -> int:
        return self.inner.dim

    def domain(self):
        return self.inner.domain().translated(self.shift)

    def value(self, x):
        return self.inner.value(x - self.shift)

    def _prox(self, tau, x):
        return self.shift + self.inner._prox(tau, x - self.shift)

    def gradient(self, x):
        return self.inner.gradient(x - self.shift)

    def _least_norm_plus(self, x, g):
        return self.inner._least_norm_plus(x - self.shift, g)

    def quadratic_form(self):
        q, b, const = self.inner.quadratic_form()
        s = self.shift
        return q, b - q @ s, const + 0.5 * float(s @ q @ s) - float(b @ s)


@dataclass(frozen=True, eq=False)
class Sum(ConvexFn):
    """
    Quadratic/linear terms plus at most one nonsmooth term.

    The aggregated curvature must be diagonal when the nonsmooth term is
    separable, and a multiple of the identity otherwise, so that the prox
    reduces to a rescaled prox of the nonsmooth term.
    """
    members: Tuple[ConvexFn, ...]
    kind = FunctionKind.SUM

    def __post_init__(self):
        members = []
        for m in self.members:
            members.extend(m.members if isinstance(m, Sum) else [m])
        if not members:
            raise UnsupportedComposite("sum needs at least one member")
        dims = {m.dim for m in members}
        if len(dims) != 1:
            raise DimensionMismatch(f"sum members disagree on dimension: {sorted(dims)}")
        d = dims.pop()
        nonsmooth = [m for m in members if not m.is_smooth]
        if len(nonsmooth) > 1:
            raise UnsupportedComposite("a sum may contain at most one nonsmooth member")
        q, b = np.zeros((d, d)), np.zeros(d)
        const = 0.0
        for m in members:
            if m.is_smooth:
                mq, mb, mc = m.quadratic_form()
                q, b, const = q + mq, b + mb, const + mc
        g = nonsmooth[0] if nonsmooth else None
        if g is not None:
            off_diag = q - np.diag(np.diag(q))
            if np.any(off_diag != 0.0):
                raise UnsupportedComposite("nonsmooth term requires diagonal curvature")
            diag = np.diag(q)
            if not g.is_separable and np.any(diag != diag[0]):
                raise UnsupportedComposite("non-separable nonsmooth term requires scalar curvature")
        object.__setattr__(self, "members", tuple(members))
        object.__setattr__(self, "_q", frozen(q))
        object.__setattr__(self, "_b", frozen(b))
        object.__setattr__(self, "_const", const)
        object.__setattr__(self, "_nonsmooth", g)

    @property
    def is_smooth(self) -> bool:
        return self._nonsmooth is None

    @property
    def nonsmooth(self) -> Optional[ConvexFn]:
        return self._nonsmooth

    @property
    def dim(self) -> int:
        return self._b.size

    def domain(self):
        return self._nonsmooth.domain() if self._nonsmooth is not None else FullSpace(self.dim)

    def value(self, x):
        return float(sum(m.value(x) for m in self.members))

    def _prox(self, tau, x):
        if self._nonsmooth is None:
            system = tau * self._q
            system[np.diag_indices_from(system)] += 1.0
            return np.linalg.solve(system, x - tau * self._b)
        scale = 1.0 + tau * np.diag(self._q)
        return self._nonsmooth._prox(tau / scale, (x - tau * self._b) / scale)

    def _smooth_gradient(self, x):
        return self._q @ x + self._b

    def gradient(self, x):
        g = self._smooth_gradient(x)
        if self._nonsmooth is not None:
            g = g + self._nonsmooth.gradient(x)
        return g

    def _least_norm_plus(self, x, g):
        g = g + self._smooth_gradient(x)
        if self._nonsmooth is None:
            return g
        return self._nonsmooth._least_norm_plus(x, g)

    def quadratic_form(self):
        if self._nonsmooth is not None:
            raise UnsupportedComposite("sum has a nonsmooth member")
        return self._q, self._b, self._const


def weighted_quadratic_mean(pool: Sequence[ConvexFn], weights: Sequence[float]) -> Quadratic:
    """Collapses a weighted pool of smooth quadratic forms into one Quadratic."""
    d = pool[0].dim
    q, b = np.zeros((d, d)), np.zeros(d)
    for f, w in zip(pool, weights):
        fq, fb, _ = f.quadratic_form()
        q, b = q + w * fq, b + w * fb
    return Quadratic(q, b)
