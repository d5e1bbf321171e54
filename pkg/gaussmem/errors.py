from typing import Optional


class GaussMemError(Exception):
    """Base exception for all gaussmem failures"""
    pass


class DomainError(GaussMemError, ValueError):
    """Argument outside the domain of an operation"""
    pass


class SingularPointError(DomainError):
    """Evaluation at the threshold singularity mu*kappa = 1, z = 0"""
    pass


class UnsupportedRegimeError(DomainError):
    """Parameters fall in a regime the closed forms do not cover"""
    pass


class ResourceError(DomainError):
    """Requested matrix size exceeds the configured cap"""
    pass


class SolverError(GaussMemError, RuntimeError):
    """Root bracketing or iterative solve failed"""
    pass


class QuadratureError(SolverError):
    """
    Adaptive quadrature did not reach the requested tolerance.

    Attributes:
        best_estimate: Last integral value produced by the integrator
        error_estimate: Absolute error estimate attached to that value
    """

    def __init__(self, message: str, best_estimate: Optional[float] = None,
                 error_estimate: Optional[float] = None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class UsageError(GaussMemError):
    """Invalid command-line flag combination"""
    pass
