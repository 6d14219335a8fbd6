"""Exception hierarchy shared by all modules."""


class BilliardError(Exception):
    """Base class for errors raised by this package."""


class DegenerateFitError(BilliardError):
    """Conic fit input is rank deficient (too few or collinear points)."""


class ClosureError(BilliardError):
    """A constructed 3-periodic failed its Poncelet closure check."""


class ConvergenceError(BilliardError):
    """An iterative solver or quadrature did not converge."""


class PointAtInfinityError(BilliardError):
    """Trilinear conversion hit the line at infinity (D ~ 0)."""


class UndefinedCenterError(BilliardError):
    """A triangle center is undefined for the given triangle."""


class DegenerateTriangleError(BilliardError):
    """A derived-triangle construction collapsed."""

    def __init__(self, kind, reason):
        super().__init__(f"{kind}: {reason}")
        self.kind = kind
        self.reason = reason


class DomainError(BilliardError, ValueError):
    """Argument outside the domain of a closed-form expression."""


class RailError(BilliardError):
    """A point expected on the billiard (or caustic) is off it."""

    def __init__(self, message, residual):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class NonMonotonePredicateError(BilliardError):
    """A behavioural predicate flipped more than once inside the scan range."""
