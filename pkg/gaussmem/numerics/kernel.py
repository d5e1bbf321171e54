"""
Shared numerical kernel: the thermal entropy function, adaptive quadrature,
bracketed root finding and symmetric eigenvalues.

All functions are pure and hold no state between calls.
"""
import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as sp_integrate
from scipy import optimize

from gaussmem.config import settings
from gaussmem.errors import DomainError, QuadratureError, SolverError
from gaussmem.models.results import Bracket, QuadratureResult

logger = logging.getLogger(__name__)

_SERIES_CUTOFF = 1e-12


def g(x: float) -> float:
    """
    Von Neumann entropy (nats) of a thermal state with mean photon number x.

    Computes (x+1)ln(x+1) - x ln x as log1p(x) + x*log1p(1/x).

    Args:
        x: Mean photon number, finite and non-negative

    Returns:
        Entropy in nats; exactly 0 at x = 0

    Raises:
        DomainError: If x is negative or not finite
    """
    if not math.isfinite(x) or x < 0:
        raise DomainError(f"g(x) requires finite x >= 0, got {x}")
    if x == 0:
        return 0.0
    if x < _SERIES_CUTOFF:
        return x * (1.0 - math.log(x))
    return math.log1p(x) + x * math.log1p(1.0 / x)


def integrate(f: Callable[[float], float], a: float, b: float,
              tol: Optional[float] = None,
              points: Optional[Sequence[float]] = None) -> QuadratureResult:
    """
    Adaptive quadrature of f over [a, b].

    Args:
        f: Integrand, finite on [a, b] and smooth away from the split points
        a: Lower limit
        b: Upper limit, strictly greater than a
        tol: Absolute and relative tolerance (defaults to settings.quad_tol)
        points: Interior points where f has a kink

    Returns:
        QuadratureResult with value, error estimate and evaluation count

    Raises:
        DomainError: If the interval is empty or reversed
        QuadratureError: If the tolerance is not met within the subdivision budget
    """
    if not (math.isfinite(a) and math.isfinite(b)) or a >= b:
        raise DomainError(f"Quadrature needs a finite interval a < b, got [{a}, {b}]")
    tol = settings.quad_tol if tol is None else tol
    splits = None
    if points:
        inner = sorted({p for p in points if a < p < b})
        splits = inner or None

    result = sp_integrate.quad(f, a, b, epsabs=tol, epsrel=tol,
                               limit=settings.quad_limit, points=splits,
                               full_output=1)
    value, error, info = result[0], result[1], result[2]
    evaluations = max(int(info.get("neval", 1)), 1)

    if len(result) > 3:
        message = result[3]
        if "roundoff" in str(message).lower():
            logger.warning(f"Quadrature on [{a}, {b}] limited by round-off: err={error:.3g}")
        else:
            logger.error(f"Quadrature on [{a}, {b}] failed: {message}")
            raise QuadratureError(f"Quadrature did not converge: {message}",
                                  best_estimate=value, error_estimate=error)

    return QuadratureResult(value=value, error_estimate=abs(error), evaluations=evaluations)


def find_root(f: Callable[[float], float], bracket: Bracket,
              tol: Optional[float] = None) -> float:
    """
    Bisection root of a continuous function that changes sign over the bracket.

    Args:
        f: Continuous (typically monotone) function
        bracket: Interval whose end values have opposite signs
        tol: Bracket width at which bisection stops (defaults to settings.root_tol)

    Returns:
        Abscissa of the sign change

    Raises:
        DomainError: If f does not change sign over the bracket
        SolverError: If bisection exhausts its iteration budget
    """
    tol = settings.root_tol if tol is None else tol
    f_lo, f_hi = f(bracket.lo), f(bracket.hi)
    if f_lo == 0:
        return bracket.lo
    if f_hi == 0:
        return bracket.hi
    if math.isnan(f_lo) or math.isnan(f_hi) or f_lo * f_hi > 0:
        raise DomainError(
            f"Invalid bracket [{bracket.lo}, {bracket.hi}]: f values {f_lo}, {f_hi}"
        )
    try:
        return optimize.bisect(f, bracket.lo, bracket.hi, xtol=tol,
                               maxiter=settings.bracket_steps)
    except RuntimeError as e:
        raise SolverError(f"Bisection did not converge: {e}")


def sym_eigenvalues(m: np.ndarray) -> np.ndarray:
    """
    Eigenvalues of a real symmetric matrix in ascending order.

    Raises:
        DomainError: If m is not square or not symmetric within 1e-12 relative
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"Expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and float(np.max(np.abs(m - m.T))) > 1e-12 * scale:
        raise DomainError("Matrix is not symmetric")
    return np.linalg.eigvalsh(m)
