"""
Registry for problem builders.

Maps each ProblemKind to a parser that reads the `problem` object of an
experiment configuration and calls the matching builder.
"""

from typing import Any, Callable, Dict, List, Optional

from models.enums import OperatorKind, ProblemKind
from models.errors import (ConfigError, DimensionMismatch, InvalidProblem, NonFiniteValue, NotMonotone,
                           UnsupportedComposite, UnsupportedSet)
from models.operators.registry import OperatorRegistry
from models.problems import builders
from models.problems.instance import ProblemInstance
from models.serialization import (parse_function, parse_int, parse_kind, parse_number, parse_sets, parse_vector,
                                  require)

ProblemParser = Callable[[Dict[str, Any], str], ProblemInstance]

# data errors that mean the configuration is wrong, as opposed to oracle failures
_CONSTRUCTION_ERRORS = (InvalidProblem, DimensionMismatch, NotMonotone, UnsupportedComposite, UnsupportedSet,
                        NonFiniteValue)


def construct(field: str, builder, *args, **kwargs) -> ProblemInstance:
    """Calls a builder, re-raising construction errors as ConfigError on `field`."""
    try:
        return builder(*args, **kwargs)
    except _CONSTRUCTION_ERRORS as exc:
        raise ConfigError(field, str(exc)) from exc


class ProblemRegistry:
    """
    A singleton registry of problem parsers.
    """
    _instance: Optional['ProblemRegistry'] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(ProblemRegistry, cls).__new__(cls)
            cls._instance._parsers: Dict[ProblemKind, ProblemParser] = {}
            cls._instance._register_defaults()
        return cls._instance

    def _register_defaults(self):
        self.register(ProblemKind.FAMILY, _family)
        self.register(ProblemKind.ROTATION, lambda spec, field: builders.build_rotation())
        self.register(ProblemKind.FEASIBILITY, _feasibility)
        self.register(ProblemKind.CONSTRAINED_PROGRAM, _constrained_program)
        self.register(ProblemKind.SADDLE, _saddle)
        self.register(ProblemKind.STRONGLY_MONOTONE, _strongly_monotone)
        self.register(ProblemKind.VARIATIONAL_INEQUALITY, _variational_inequality)
        self.register(ProblemKind.RANDOM_CONSTRAINED_PROGRAM, _random_constrained_program)
        self.register(ProblemKind.RANDOM_SADDLE, _random_saddle)
        self.register(ProblemKind.RANDOM_STRONGLY_MONOTONE, _random_strongly_monotone)

    def register(self, kind: ProblemKind, parser: ProblemParser):
        self._parsers[kind] = parser

    def list_kinds(self) -> List[str]:
        return [k.value for k in self._parsers]

    def build(self, spec: Dict[str, Any], field: str = "problem") -> ProblemInstance:
        """
        Builds a problem instance from its JSON object.

        Raises:
            ConfigError: the object is malformed or describes invalid data.
            NoConvergence, SingularMean, CertificateError: an oracle failed.
        """
        kind = parse_kind(spec, ProblemKind, field)
        return self._parsers[kind](spec, field)


def _optional(spec, key, parser, field):
    value = spec.get(key)
    return None if value is None else parser(value, f"{field}.{key}")


def _operators(spec, field, kind: Optional[OperatorKind] = None):
    members = require(spec, "members", field)
    if not isinstance(members, list) or not members:
        raise ConfigError(f"{field}.members", "expected a non-empty list of operators")
    registry = OperatorRegistry()
    out = []
    for i, m in enumerate(members):
        if kind is not None and isinstance(m, dict) and "kind" not in m:
            m = dict(m, kind=kind.value)
        out.append(registry.build(m, f"{field}.members[{i}]"))
    return out


def _p0(spec, field):
    return parse_number(require(spec, "p0", field), f"{field}.p0")


def _family(spec, field):
    members = _operators(spec, field)
    return construct(field, builders.build_family, members, _optional(spec, "weights", parse_vector, field),
                     _optional(spec, "known_solution", parse_vector, field))


def _feasibility(spec, field):
    sets = parse_sets(require(spec, "sets", field), f"{field}.sets")
    return construct(field, builders.build_feasibility, sets, _optional(spec, "weights", parse_vector, field),
                     _optional(spec, "anchor", parse_vector, field))


def _constrained_program(spec, field):
    functions = require(spec, "functions", field)
    if not isinstance(functions, list) or not functions:
        raise ConfigError(f"{field}.functions", "expected a non-empty list of functions")
    pool = [parse_function(f, f"{field}.functions[{i}]") for i, f in enumerate(functions)]
    sets = parse_sets(require(spec, "sets", field), f"{field}.sets")
    return construct(field, builders.build_constrained_program, pool,
                     _optional(spec, "function_weights", parse_vector, field), sets, _p0(spec, field),
                     _optional(spec, "set_weights", parse_vector, field))


def _saddle(spec, field):
    pool = _operators(spec, field, OperatorKind.SADDLE_BILINEAR)
    return construct(field, builders.build_saddle, pool, _optional(spec, "weights", parse_vector, field))


def _strongly_monotone(spec, field):
    pool = _operators(spec, field, OperatorKind.AFFINE)
    return construct(field, builders.build_strongly_monotone, pool, _optional(spec, "weights", parse_vector, field))


def _variational_inequality(spec, field):
    op_spec = require(spec, "operator", field)
    if isinstance(op_spec, dict) and "kind" not in op_spec:
        op_spec = dict(op_spec, kind=OperatorKind.AFFINE.value)
    operator = OperatorRegistry().build(op_spec, f"{field}.operator")
    if operator.kind is not OperatorKind.AFFINE:
        raise ConfigError(f"{field}.operator", "variational inequalities need an affine operator")
    sets = parse_sets(require(spec, "sets", field), f"{field}.sets")
    return construct(field, builders.build_variational_inequality, operator, sets, _p0(spec, field),
                     _optional(spec, "set_weights", parse_vector, field))


def _pool_args(spec, field):
    seed = parse_int(require(spec, "seed", field), f"{field}.seed", 0)
    size = parse_int(require(spec, "pool_size", field), f"{field}.pool_size", 1)
    spread = parse_number(spec.get("spread", 0.1), f"{field}.spread")
    return seed, size, spread


def _random_constrained_program(spec, field):
    seed, size, spread = _pool_args(spec, field)
    dim = parse_int(require(spec, "dim", field), f"{field}.dim", 1)
    center = _optional(spec, "center", parse_vector, field)
    pool = construct(field, builders.random_quadratic_pool, seed, size, dim, center, spread)
    sets = parse_sets(require(spec, "sets", field), f"{field}.sets")
    return construct(field, builders.build_constrained_program, pool, None, sets, _p0(spec, field),
                     _optional(spec, "set_weights", parse_vector, field))


def _random_saddle(spec, field):
    seed, size, spread = _pool_args(spec, field)
    dx = parse_int(require(spec, "dx", field), f"{field}.dx", 1)
    dy = parse_int(require(spec, "dy", field), f"{field}.dy", 1)
    pool = construct(field, builders.random_saddle_pool, seed, size, dx, dy, spread)
    return construct(field, builders.build_saddle, pool)


def _random_strongly_monotone(spec, field):
    seed, size, spread = _pool_args(spec, field)
    dim = parse_int(require(spec, "dim", field), f"{field}.dim", 1)
    alpha = parse_number(spec.get("alpha", 0.5), f"{field}.alpha")
    pool = construct(field, builders.random_affine_pool, seed, size, dim, alpha, spread)
    return construct(field, builders.build_strongly_monotone, pool)
