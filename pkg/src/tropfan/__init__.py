"""Exact computations with weighted rational fans and tropical regular functions."""

from .fan import WeightedFan, ZeroCycle, check_balanced, validate
from .trop import TRFunction, intersection_number, max_of, product, stable_intersect

__all__ = [
    "WeightedFan",
    "ZeroCycle",
    "TRFunction",
    "check_balanced",
    "validate",
    "max_of",
    "product",
    "intersection_number",
    "stable_intersect",
]
__version__ = "0.1.0"
