"""
Data containers and state models for the SPPA toolkit.

These dataclasses carry schedules, iteration state, run results and the
experiment configuration between the model, controller and view layers.
"""

import copy
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy import special

from models.enums import ProblemKind
from models.errors import ConfigError, InvalidSchedule
from models.serialization import parse_int, parse_kind, parse_number, parse_vector

SCHEMA_VERSION = 1
TRACE_ROW_LIMIT = 10_000

TRACE_COLUMNS = [
    "n", "lambda", "xi_index", "dist_to_solution", "dist_to_domain",
    "dist_avg_to_feasible", "objective_avg", "norm_x",
]


@dataclass(frozen=True)
class StepSchedule:
    """
    Power-law steps lambda_n = lambda0 * (n + n0 + 1)^(-gamma), n = 0, 1, 2, ...

    gamma in (1/2, 1] is exactly the range where the steps are square
    summable but not summable.
    """
    lambda0: float = 1.0
    gamma: float = 0.75
    n0: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.lambda0) and self.lambda0 > 0.0):
            raise InvalidSchedule(f"lambda0 must be positive, got {self.lambda0}")
        if not (0.5 < self.gamma <= 1.0):
            raise InvalidSchedule(
                f"gamma={self.gamma} is outside (1/2, 1]: the steps must lie in "
                "ℓ²\\ℓ¹ (sum of lambda_n infinite, sum of lambda_n^2 finite)"
            )
        if isinstance(self.n0, bool) or int(self.n0) != self.n0 or self.n0 < 0:
            raise InvalidSchedule(f"n0 must be a nonnegative integer, got {self.n0}")
        object.__setattr__(self, "lambda0", float(self.lambda0))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "n0", int(self.n0))

    def step(self, n: int) -> float:
        return self.lambda0 * (n + self.n0 + 1) ** (-self.gamma)

    def steps(self, count: int, start: int = 0) -> np.ndarray:
        """lambda_start, ..., lambda_{start+count-1} as an array."""
        n = np.arange(start, start + count, dtype=float)
        return self.lambda0 * (n + self.n0 + 1.0) ** (-self.gamma)

    def partial_sum(self, count: int) -> float:
        return float(np.sum(self.steps(count)))

    def partial_square_sum(self, count: int) -> float:
        return float(np.sum(self.steps(count) ** 2))

    def square_sum_limit(self) -> float:
        """sum_{n>=0} lambda_n^2, via the Hurwitz zeta function."""
        return float(self.lambda0 ** 2 * special.zeta(2.0 * self.gamma, self.n0 + 1.0))

    def square_tail_bound(self, count: int) -> float:
        """sum_{n>=count} lambda_n^2."""
        return float(self.lambda0 ** 2 * special.zeta(2.0 * self.gamma, count + self.n0 + 1.0))

    def cauchy_horizon(self, eps: float) -> int:
        """
        First N whose square tail sum_{n>=N} lambda_n^2 is <= eps.

        The start is the integral bound
        lambda0^2 (N + n0)^(1 - 2 gamma) / (2 gamma - 1) <= eps, which is
        tight to rounding for large N, so it is moved forward until the
        exact tail passes.
        """
        p = 2.0 * self.gamma - 1.0
        base = (self.lambda0 ** 2 / (eps * p)) ** (1.0 / p)
        horizon = max(1, int(math.ceil(base - self.n0)))
        while self.square_tail_bound(horizon) > eps:
            horizon += max(1, horizon // 10 ** 12)
        return horizon

    def to_dict(self) -> Dict[str, Any]:
        return {"lambda0": self.lambda0, "gamma": self.gamma, "n0": self.n0}


@dataclass(frozen=True, eq=False)
class SppaState:
    """
    Iteration state after n steps.

    Attributes:
        n: Number of completed steps.
        x: Current iterate x_n.
        xbar: Weighted ergodic average of the accumulated iterates.
        lam_sum: Running sum of the weights that entered xbar.
        last_index: Member index sampled by the last step (None before the first).
        last_lambda: Step used by the last step.
    """
    n: int
    x: np.ndarray
    xbar: np.ndarray
    lam_sum: float = 0.0
    last_index: Optional[int] = None
    last_lambda: Optional[float] = None

    @classmethod
    def initial(cls, x0: np.ndarray) -> "SppaState":
        x0 = np.array(x0, dtype=float)
        return cls(0, x0, x0.copy(), 0.0)


@dataclass
class DiagnosticsSettings:
    """Optional per-run instrumentation."""
    burn_in: int = 0
    domain_ratio: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"burn_in": self.burn_in, "domain_ratio": self.domain_ratio}


@dataclass
class OutputSettings:
    """File names written below the --out directory."""
    trace_pattern: str = "trace_{replica:03d}.csv"
    summary: str = "summary.csv"

    def trace_name(self, replica: int) -> str:
        return self.trace_pattern.format(replica=replica)

    def to_dict(self) -> Dict[str, Any]:
        return {"trace_pattern": self.trace_pattern, "summary": self.summary}


@dataclass
class RunSummary:
    """End-of-run statistics for one replica."""
    replica: int
    seed: int
    iterations: int
    final_x: np.ndarray
    final_xbar: np.ndarray
    wall_time: float = 0.0
    dist_to_solution: Optional[float] = None
    dist_avg_to_solution: Optional[float] = None
    dist_avg_to_feasible: Optional[float] = None
    objective_avg: Optional[float] = None
    tail_positive_variation: Optional[float] = None
    sup_domain_ratio: Optional[float] = None
    gap: Optional[float] = None


@dataclass
class RunReport:
    """
    Trace and summary of a single run.

    `iterates` and `averages` hold x_n and xbar_n at the recorded rows;
    `lambdas` and `indices` hold every step, so the average can be
    recomputed exactly when the stride is one.
    """
    trace: pd.DataFrame
    summary: RunSummary
    iterates: np.ndarray
    averages: np.ndarray
    lambdas: np.ndarray
    indices: np.ndarray
    domain_ratio: Optional[np.ndarray] = None


@dataclass
class VerificationResult:
    """Outcome of the oracle and certificate checks behind `verify`."""
    kind: str
    known_solution: Optional[np.ndarray]
    certificate: str
    residual: Optional[float]
    modulus: Optional[float] = None
    feasibility_residual: Optional[float] = None
    regularity_constant: Optional[float] = None
    notes: List[str] = field(default_factory=list)


def default_stride(iterations: int) -> int:
    """Every iterate up to TRACE_ROW_LIMIT rows, otherwise every ceil(N/limit)-th."""
    if iterations <= TRACE_ROW_LIMIT:
        return 1
    return int(math.ceil(iterations / TRACE_ROW_LIMIT))


@dataclass
class ExperimentConfig:
    """
    A validated experiment description.

    `problem` keeps the raw JSON object of the problem; it is parsed by the
    problem registry when the experiment is built.
    """
    problem: Dict[str, Any]
    schedule: StepSchedule = field(default_factory=StepSchedule)
    iterations: int = 1000
    x0: Optional[Tuple[float, ...]] = None
    replicas: int = 1
    master_seed: int = 0
    trace_stride: Optional[int] = None
    workers: Optional[int] = None
    diagnostics: DiagnosticsSettings = field(default_factory=DiagnosticsSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    @property
    def stride(self) -> int:
        return self.trace_stride if self.trace_stride is not None else default_stride(self.iterations)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "problem": copy.deepcopy(self.problem),
            "x0": list(self.x0) if self.x0 is not None else None,
            "schedule": self.schedule.to_dict(),
            "iterations": self.iterations,
            "replicas": self.replicas,
            "master_seed": self.master_seed,
            "trace_stride": self.trace_stride,
            "workers": self.workers,
            "diagnostics": self.diagnostics.to_dict(),
            "output": self.output.to_dict(),
        }

    @classmethod
    def from_dict(cls, raw: Any) -> "ExperimentConfig":
        """
        Validates a parsed JSON document.

        Raises:
            ConfigError: naming the first offending field.
        """
        if not isinstance(raw, dict):
            raise ConfigError("<root>", "expected a JSON object")
        unknown = set(raw) - _TOP_LEVEL_KEYS
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        if raw.get("schema_version") != SCHEMA_VERSION:
            raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {raw.get('schema_version')!r}")

        problem = raw.get("problem")
        if not isinstance(problem, dict):
            raise ConfigError("problem", "expected an object with a 'kind'")
        parse_kind(problem, ProblemKind, "problem")

        x0 = raw.get("x0")
        x0 = tuple(parse_vector(x0, "x0").tolist()) if x0 is not None else None

        iterations = parse_int(raw.get("iterations"), "iterations", 1)
        diagnostics = _parse_diagnostics(raw.get("diagnostics") or {}, iterations)
        return cls(
            problem=copy.deepcopy(problem),
            schedule=_parse_schedule(raw.get("schedule") or {}),
            iterations=iterations,
            x0=x0,
            replicas=parse_int(raw.get("replicas", 1), "replicas", 1),
            master_seed=_parse_seed(raw.get("master_seed", 0), "master_seed"),
            trace_stride=_optional_int(raw.get("trace_stride"), "trace_stride"),
            workers=_optional_int(raw.get("workers"), "workers"),
            diagnostics=diagnostics,
            output=_parse_output(raw.get("output") or {}),
        )


_TOP_LEVEL_KEYS = {
    "schema_version", "problem", "x0", "schedule", "iterations", "replicas",
    "master_seed", "trace_stride", "workers", "diagnostics", "output",
}


def _optional_int(value: Any, name: str) -> Optional[int]:
    return None if value is None else parse_int(value, name, 1)


def _parse_seed(value: Any, name: str) -> int:
    seed = parse_int(value, name, 0)
    if seed >= 2 ** 64:
        raise ConfigError(name, "must fit in 64 bits")
    return seed


def _parse_schedule(raw: Any) -> StepSchedule:
    if not isinstance(raw, dict):
        raise ConfigError("schedule", "expected an object")
    lambda0 = parse_number(raw.get("lambda0", 1.0), "schedule.lambda0")
    gamma = parse_number(raw.get("gamma", 0.75), "schedule.gamma")
    n0 = parse_int(raw.get("n0", 0), "schedule.n0", 0)
    try:
        return StepSchedule(lambda0, gamma, n0)
    except InvalidSchedule as exc:
        name = "schedule.gamma" if "gamma" in str(exc) else "schedule.lambda0"
        raise ConfigError(name, str(exc)) from exc


def _parse_diagnostics(raw: Any, iterations: int) -> DiagnosticsSettings:
    if not isinstance(raw, dict):
        raise ConfigError("diagnostics", "expected an object")
    burn_in = parse_int(raw.get("burn_in", 0), "diagnostics.burn_in", 0)
    if burn_in >= iterations:
        raise ConfigError("diagnostics.burn_in", "must be smaller than iterations")
    domain_ratio = raw.get("domain_ratio", False)
    if not isinstance(domain_ratio, bool):
        raise ConfigError("diagnostics.domain_ratio", "expected true or false")
    return DiagnosticsSettings(burn_in, domain_ratio)


def _parse_output(raw: Any) -> OutputSettings:
    if not isinstance(raw, dict):
        raise ConfigError("output", "expected an object")
    defaults = OutputSettings()
    pattern = raw.get("trace_pattern", defaults.trace_pattern)
    summary = raw.get("summary", defaults.summary)
    if not isinstance(pattern, str) or "{replica" not in pattern:
        raise ConfigError("output.trace_pattern", "must be a string containing '{replica}'")
    try:
        pattern.format(replica=0)
    except (KeyError, ValueError, IndexError) as exc:
        raise ConfigError("output.trace_pattern", f"invalid pattern: {exc}") from exc
    if not isinstance(summary, str) or not summary:
        raise ConfigError("output.summary", "expected a file name")
    return OutputSettings(pattern, summary)
