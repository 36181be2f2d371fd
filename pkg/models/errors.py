"""
Exception hierarchy for the SPPA toolkit.

Every error raised by the domain layer derives from SppaError so that the
command-line controller can translate failures into exit codes in one place.
"""


class SppaError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(SppaError):
    """Two objects that must share the ambient dimension do not."""


class NonFiniteValue(SppaError, ValueError):
    """A vector or matrix contains NaN or infinite entries."""


class SingularSystem(SppaError):
    """A linear solve failed; impossible for valid monotone data."""


class DomainError(SppaError):
    """The point lies outside the domain of the operator or function."""


class SetValuedAt(SppaError):
    """The operator is multi-valued at the requested point."""


class UnsupportedComposite(SppaError):
    """A composite function has no closed-form proximity operator."""


class UnsupportedSet(SppaError):
    """The set has no closed-form projection (e.g. a general intersection)."""


class NotMonotone(SppaError):
    """The symmetric part of a linear map is not positive semidefinite."""


class InvalidSchedule(SppaError):
    """The step-size schedule violates the l2 minus l1 requirement."""


class InvalidProblem(SppaError):
    """A problem builder received inconsistent data."""


class NonFiniteIterate(SppaError):
    """An iterate left the finite range during a run."""

    def __init__(self, iteration: int, message: str = ""):
        self.iteration = iteration
        super().__init__(message or f"non-finite iterate at n={iteration}")


class NoConvergence(SppaError):
    """An oracle hit its iteration cap before meeting its tolerance."""

    def __init__(self, oracle: str, iterations: int, residual: float):
        self.oracle = oracle
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"{oracle} did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )


class EmptyIntersection(NoConvergence):
    """The sets of a feasibility instance appear to be disjoint."""


class SingularMean(SppaError):
    """The mean linear map is singular, so the zero is not unique."""


class CertificateError(SppaError):
    """A known solution fails its residual certificate."""


class ConfigError(SppaError):
    """An experiment configuration failed validation."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
