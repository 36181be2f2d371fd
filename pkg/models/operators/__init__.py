from models.operators.affine import AffineMonotone
from models.operators.base import BaseOperator
from models.operators.calculus import domain_projection, least_norm, project, prox, resolvent, yosida
from models.operators.saddle import SaddleBilinear
from models.operators.scaled import Scaled
from models.operators.subdifferential import NormalCone, Subdifferential

__all__ = [
    "AffineMonotone", "BaseOperator", "NormalCone", "SaddleBilinear", "Scaled", "Subdifferential",
    "domain_projection", "least_norm", "project", "prox", "resolvent", "yosida",
]
