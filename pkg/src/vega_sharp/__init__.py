"""Certified Bessel-integral hierarchies for sharp mixed-norm extension constants."""

__version__ = "0.1.0"

from .enclosure import Enclosure
from .errors import DomainError, RangeError, ToleranceNotMet
from .norms import LambdaResult, ProblemSpec, lambda_norm

__all__ = [
    "Enclosure",
    "DomainError",
    "RangeError",
    "ToleranceNotMet",
    "LambdaResult",
    "ProblemSpec",
    "lambda_norm",
    "__version__",
]
