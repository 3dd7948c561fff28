"""Exception types raised across the package."""


class MaxThetaError(Exception):
    """Base class for all package errors."""


class NonPositiveParameter(MaxThetaError, ValueError):
    pass


class BudgetExceeded(MaxThetaError, RuntimeError):
    """A series hit ``max_terms`` before its tail bound was met."""


class NotPositiveDefinite(MaxThetaError, ValueError):
    pass


class NotReduced(MaxThetaError, ValueError):
    """Centered theta requested on a parameter outside the fundamental domain."""


class NotReducedWarning(UserWarning):
    """Emitted when a parameter is reduced automatically before evaluation."""


class DomainViolation(MaxThetaError, ValueError):
    pass


class NonSummablePotential(MaxThetaError, ValueError):
    pass


class QuadratureFailure(MaxThetaError, RuntimeError):
    pass


class PoleOrDivergent(MaxThetaError, ValueError):
    pass


class DegenerateInput(MaxThetaError, ValueError):
    pass


class OddCount(MaxThetaError, ValueError):
    pass


class TooLargeForExhaustive(MaxThetaError, ValueError):
    pass


def require_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise NonPositiveParameter(f"{name} must be positive, got {value!r}")
