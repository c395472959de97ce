"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument violates a physical or numerical precondition."""


class ExtrapolationError(ValueError):
    """An optical table lacks a usable low-frequency continuation."""


class PrescriptionError(ValueError):
    """A material carries no zero-frequency reflection rule."""


class ConvergenceError(RuntimeError):
    """A quadrature or series failed to reach the requested tolerance.

    Carries the best available estimate and the tolerance actually achieved
    so callers can decide whether the partial result is still usable.
    """

    def __init__(self, message, best_estimate=None, achieved_tolerance=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.achieved_tolerance = achieved_tolerance
