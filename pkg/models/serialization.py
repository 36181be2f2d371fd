"""
Parsing of JSON specifications into catalog objects.

Every parser takes the dotted path of the value it reads so that validation
failures name the offending field.
"""

from typing import Any, Dict, List

import numpy as np

from models.enums import FunctionKind, SetKind
from models.errors import ConfigError, SppaError
from models.functions import ConvexFn, Indicator, Linear, Quadratic, Sum, Translated, WeightedL1
from models.sets import Ball, Box, ConvexSet, FullSpace, Halfspace, Hyperplane, Intersection


def require(spec: Dict[str, Any], key: str, field: str) -> Any:
    if not isinstance(spec, dict):
        raise ConfigError(field, "expected an object")
    if key not in spec:
        raise ConfigError(f"{field}.{key}", "missing required field")
    return spec[key]


def parse_number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(field, f"expected a number, got {value!r}")
    if not np.isfinite(value):
        raise ConfigError(field, "must be finite")
    return float(value)


def parse_int(value: Any, field: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field, f"expected an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(field, f"must be >= {minimum}")
    return value


def parse_vector(value: Any, field: str) -> np.ndarray:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError(field, "expected a non-empty list of numbers")
    return np.array([parse_number(v, f"{field}[{i}]") for i, v in enumerate(value)])


def parse_matrix(value: Any, field: str) -> np.ndarray:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        value = [[value]]
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ConfigError(field, "expected a list of rows")
    rows = [parse_vector(r, f"{field}[{i}]") for i, r in enumerate(value)]
    if len({r.size for r in rows}) != 1:
        raise ConfigError(field, "rows have different lengths")
    return np.vstack(rows)


def parse_kind(spec: Dict[str, Any], enum_cls, field: str):
    raw = require(spec, "kind", field)
    try:
        return enum_cls(raw)
    except ValueError:
        choices = ", ".join(k.value for k in enum_cls)
        raise ConfigError(f"{field}.kind", f"unknown kind {raw!r} (expected one of: {choices})")


def built(field: str, factory, *args):
    """Runs a constructor, re-raising domain errors as ConfigError on `field`."""
    try:
        return factory(*args)
    except ConfigError:
        raise
    except SppaError as exc:
        raise ConfigError(field, str(exc)) from exc


def parse_set(spec: Dict[str, Any], field: str) -> ConvexSet:
    kind = parse_kind(spec, SetKind, field)
    if kind is SetKind.BOX:
        return built(field, Box, parse_vector(require(spec, "lower", field), f"{field}.lower"),
                     parse_vector(require(spec, "upper", field), f"{field}.upper"))
    if kind in (SetKind.HALFSPACE, SetKind.HYPERPLANE):
        cls = Halfspace if kind is SetKind.HALFSPACE else Hyperplane
        return built(field, cls, parse_vector(require(spec, "normal", field), f"{field}.normal"),
                     parse_number(require(spec, "offset", field), f"{field}.offset"))
    if kind is SetKind.BALL:
        return built(field, Ball, parse_vector(require(spec, "center", field), f"{field}.center"),
                     parse_number(require(spec, "radius", field), f"{field}.radius"))
    if kind is SetKind.FULL_SPACE:
        return built(field, FullSpace, parse_int(require(spec, "dim", field), f"{field}.dim", 1))
    members = parse_sets(require(spec, "members", field), f"{field}.members")
    return built(field, Intersection, tuple(members))


def parse_sets(value: Any, field: str) -> List[ConvexSet]:
    if not isinstance(value, list) or not value:
        raise ConfigError(field, "expected a non-empty list of sets")
    return [parse_set(s, f"{field}[{i}]") for i, s in enumerate(value)]


def parse_function(spec: Dict[str, Any], field: str) -> ConvexFn:
    kind = parse_kind(spec, FunctionKind, field)
    if kind is FunctionKind.QUADRATIC:
        return built(field, Quadratic, parse_matrix(require(spec, "Q", field), f"{field}.Q"),
                     parse_vector(require(spec, "b", field), f"{field}.b"))
    if kind is FunctionKind.LINEAR:
        return built(field, Linear, parse_vector(require(spec, "b", field), f"{field}.b"))
    if kind is FunctionKind.WEIGHTED_L1:
        return built(field, WeightedL1, parse_vector(require(spec, "weights", field), f"{field}.weights"))
    if kind is FunctionKind.INDICATOR:
        return built(field, Indicator, parse_set(require(spec, "set", field), f"{field}.set"))
    if kind is FunctionKind.TRANSLATE:
        inner = parse_function(require(spec, "inner", field), f"{field}.inner")
        return built(field, Translated, inner, parse_vector(require(spec, "shift", field), f"{field}.shift"))
    members = require(spec, "members", field)
    if not isinstance(members, list) or not members:
        raise ConfigError(f"{field}.members", "expected a non-empty list of functions")
    parsed = [parse_function(m, f"{field}.members[{i}]") for i, m in enumerate(members)]
    return built(field, Sum, tuple(parsed))
