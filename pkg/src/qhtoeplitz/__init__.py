"""Exact calculus for quasihomogeneous Toeplitz operators on the Bergman space."""

from .exact import (
    AlgebraError,
    GaussianRational,
    PartialFractionForm,
    PoleEvaluationError,
    Polynomial,
    RationalFunction,
    UnsupportedDenominatorError,
    grat,
    normalize,
    partial_fractions,
)

__all__ = [
    "AlgebraError",
    "GaussianRational",
    "PartialFractionForm",
    "PoleEvaluationError",
    "Polynomial",
    "RationalFunction",
    "UnsupportedDenominatorError",
    "grat",
    "normalize",
    "partial_fractions",
]
