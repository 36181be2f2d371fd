"""
Registry for the operator catalog.
"""

from typing import Any, Callable, Dict, List, Optional

from models.enums import OperatorKind
from models.operators.affine import AffineMonotone
from models.operators.base import BaseOperator
from models.operators.saddle import SaddleBilinear
from models.operators.scaled import Scaled
from models.operators.subdifferential import NormalCone, Subdifferential
from models.serialization import (built, parse_function, parse_kind, parse_matrix, parse_number, parse_set,
                                  parse_vector, require)

OperatorFactory = Callable[[Dict[str, Any], str], BaseOperator]


class OperatorRegistry:
    """
    A singleton registry that maps each OperatorKind to a factory.

    Factories turn a JSON object into an operator, so configuration files can
    name any catalog member without the loader hardcoding them.
    """
    _instance: Optional['OperatorRegistry'] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super(OperatorRegistry, cls).__new__(cls)
            cls._instance._factories: Dict[OperatorKind, OperatorFactory] = {}
            cls._instance._register_defaults()
        return cls._instance

    def _register_defaults(self):
        """Registers the operators included with the toolkit."""
        self.register(OperatorKind.AFFINE, _affine)
        self.register(OperatorKind.ROTATION_2D, lambda spec, field: AffineMonotone.rotation_2d())
        self.register(OperatorKind.SUBDIFFERENTIAL, _subdifferential)
        self.register(OperatorKind.NORMAL_CONE, _normal_cone)
        self.register(OperatorKind.SADDLE_BILINEAR, _saddle)
        self.register(OperatorKind.SCALED, _scaled)

    def register(self, kind: OperatorKind, factory: OperatorFactory):
        """Adds (or replaces) the factory for an operator kind."""
        self._factories[kind] = factory

    def list_kinds(self) -> List[str]:
        return [k.value for k in self._factories]

    def build(self, spec: Dict[str, Any], field: str = "operator") -> BaseOperator:
        """Builds an operator from its JSON object."""
        kind = parse_kind(spec, OperatorKind, field)
        return self._factories[kind](spec, field)


def _affine(spec, field):
    return built(field, AffineMonotone, parse_matrix(require(spec, "M", field), f"{field}.M"),
                 parse_vector(require(spec, "b", field), f"{field}.b"))


def _subdifferential(spec, field):
    return built(field, Subdifferential, parse_function(require(spec, "function", field), f"{field}.function"))


def _normal_cone(spec, field):
    return built(field, NormalCone, parse_set(require(spec, "set", field), f"{field}.set"))


def _saddle(spec, field):
    args = [parse_matrix(require(spec, k, field), f"{field}.{k}") for k in ("P", "R", "K")]
    args += [parse_vector(require(spec, k, field), f"{field}.{k}") for k in ("c", "d")]
    return built(field, SaddleBilinear, *args)


def _scaled(spec, field):
    inner = OperatorRegistry().build(require(spec, "inner", field), f"{field}.inner")
    return built(field, Scaled, parse_number(require(spec, "alpha", field), f"{field}.alpha"), inner)
