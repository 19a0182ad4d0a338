"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """Arguments are valid mathematically but outside the supported numeric range."""


class ToleranceNotMet(RuntimeError):
    """Adaptive quadrature exhausted its depth budget.

    The best-effort result is kept on ``result`` so callers can still inspect it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
