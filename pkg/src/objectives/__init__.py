"""Objective functions: abstraction, test objectives and construction helpers."""
from objectives.base import Objective
from objectives.factory import BuiltObjective, build_objective
from objectives.log_cosh import LogCosh
from objectives.quadratic import Quadratic
from objectives.ridge_logistic import RidgeLogistic

__all__ = [
    "Objective",
    "Quadratic",
    "RidgeLogistic",
    "LogCosh",
    "BuiltObjective",
    "build_objective",
]
