"""
Core Enumerations for the SPPA toolkit.

This module provides type-safe constants for the tagged variants that appear
in experiment configuration files: operators, convex sets, convex functions
and problem families.
"""

from enum import Enum


class OperatorKind(Enum):
    """Maximal monotone operators with closed-form resolvents."""
    AFFINE = "affine"
    ROTATION_2D = "rotation2d"
    SUBDIFFERENTIAL = "subdifferential"
    NORMAL_CONE = "normal_cone"
    SADDLE_BILINEAR = "saddle_bilinear"
    SCALED = "scaled"


class SetKind(Enum):
    """Closed convex sets with exact projections."""
    BOX = "box"
    HALFSPACE = "halfspace"
    HYPERPLANE = "hyperplane"
    BALL = "ball"
    FULL_SPACE = "full_space"
    INTERSECTION = "intersection"


class FunctionKind(Enum):
    """Convex functions with closed-form proximity operators."""
    QUADRATIC = "quadratic"
    WEIGHTED_L1 = "weighted_l1"
    LINEAR = "linear"
    INDICATOR = "indicator"
    TRANSLATE = "translate"
    SUM = "sum"


class ProblemKind(Enum):
    """Application families that can be turned into a random operator family."""
    FAMILY = "family"
    ROTATION = "rotation"
    FEASIBILITY = "feasibility"
    CONSTRAINED_PROGRAM = "constrained_program"
    SADDLE = "saddle"
    STRONGLY_MONOTONE = "strongly_monotone"
    VARIATIONAL_INEQUALITY = "variational_inequality"
    RANDOM_CONSTRAINED_PROGRAM = "random_constrained_program"
    RANDOM_SADDLE = "random_saddle"
    RANDOM_STRONGLY_MONOTONE = "random_strongly_monotone"
