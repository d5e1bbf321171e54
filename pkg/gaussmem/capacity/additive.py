"""
Additive-noise limit kappa -> 1, N -> inf with (1 - kappa)(N + 1/2) = N_C.

The channel adds classical Gaussian noise correlated across uses as
N_C mu^(|i-j|/2); its normal modes see the added noise
N_C (1 - mu) / (1 + mu - 2 sqrt(mu) cos(z/2)).
"""
import logging
import math
from typing import Tuple

import numpy as np

from gaussmem.config import settings
from gaussmem.errors import DomainError, UnsupportedRegimeError
from gaussmem.models.results import (
    TWO_PI,
    AdditiveDistribution,
    Bracket,
    CapacityMethod,
    CapacityResult,
)
from gaussmem.numerics.kernel import find_root, g, integrate

logger = logging.getLogger(__name__)


def _check(mu: float, n_c: float) -> None:
    if not 0 <= mu < 1:
        raise DomainError(f"Additive limit needs mu in [0, 1), got {mu}")
    if not math.isfinite(n_c) or n_c < 0:
        raise DomainError(f"Added noise N_C must be finite and >= 0, got {n_c}")


def additive_lambda(n_c: float, energy: float) -> float:
    """lambda with 1/(e^lambda - 1) = N_C + E"""
    if not energy > 0:
        raise DomainError(f"Energy must be > 0, got {energy}")
    if n_c < 0:
        raise DomainError(f"Added noise N_C must be >= 0, got {n_c}")
    return math.log1p(1.0 / (n_c + energy))


def additive_noise_profile(mu: float, n_c: float, z: float) -> float:
    """Added noise seen by the normal mode at phase z; integrates to N_C over dz/2pi"""
    _check(mu, n_c)
    return n_c * (1 - mu) / (1 + mu - 2 * math.sqrt(mu) * math.cos(z / 2))


def additive_threshold(mu: float, n_c: float) -> float:
    """Smallest energy for which N_C + E - profile(z) stays >= 0 on the whole band"""
    _check(mu, n_c)
    root = math.sqrt(mu)
    return 2 * n_c * root / (1 - root)


def _noise_entropy(mu: float, n_c: float) -> Tuple[float, float]:
    quad = integrate(lambda z: g(additive_noise_profile(mu, n_c, z)), 0.0, TWO_PI)
    return quad.value / TWO_PI, quad.error_estimate / TWO_PI


def additive_capacity(mu: float, n_c: float, energy: float) -> CapacityResult:
    """
    Capacity g(E + N_C) - integral of g(profile(z)) dz/2pi.

    Valid when the flat water level N_C + E covers the noise peak at z = 0,
    i.e. E >= 2 N_C sqrt(mu) / (1 - sqrt(mu)).

    Raises:
        DomainError: For mu outside [0, 1) or negative N_C or E
        UnsupportedRegimeError: If E is below the positivity threshold
    """
    _check(mu, n_c)
    if not math.isfinite(energy) or energy < 0:
        raise DomainError(f"Energy must be finite and >= 0, got {energy}")
    threshold = additive_threshold(mu, n_c)
    if energy < threshold:
        raise UnsupportedRegimeError(
            f"E={energy} is below the positivity threshold {threshold:.6g}; use the clipped solution"
        )
    entropy, error = _noise_entropy(mu, n_c)
    return CapacityResult(nats_per_use=max(g(energy + n_c) - entropy, 0.0),
                          quadrature_error=error, method=CapacityMethod.ADDITIVE_LIMIT)


def _level_cutoff(mu: float, n_c: float, level: float) -> float:
    """Phase where profile(z) = level, clamped to [0, 2pi]"""
    cosine = (1 + mu - n_c * (1 - mu) / level) / (2 * math.sqrt(mu))
    return 2 * math.acos(float(np.clip(cosine, -1.0, 1.0)))


def additive_distribution(mu: float, n_c: float, energy: float) -> AdditiveDistribution:
    """
    Water level L with N(z) = max(L - profile(z), 0) averaging to E.

    The profile decreases in z, so the filled band is [z0, 2pi].
    """
    _check(mu, n_c)
    if not math.isfinite(energy) or energy <= 0:
        raise DomainError(f"Energy must be finite and > 0, got {energy}")
    if energy >= additive_threshold(mu, n_c):
        return AdditiveDistribution(mu=mu, n_c=n_c, energy=energy, level=n_c + energy, z0=0.0)

    def filled(level: float) -> float:
        z0 = _level_cutoff(mu, n_c, level)
        if z0 >= TWO_PI:
            return -energy
        quad = integrate(lambda z: max(level - additive_noise_profile(mu, n_c, z), 0.0), z0, TWO_PI)
        return quad.value / TWO_PI - energy

    floor = additive_noise_profile(mu, n_c, TWO_PI)
    level = find_root(filled, Bracket(lo=floor, hi=n_c + energy), tol=settings.root_tol)
    z0 = _level_cutoff(mu, n_c, level)
    logger.debug(f"Additive water level {level:.10g}, cutoff {z0:.6g}")
    return AdditiveDistribution(mu=mu, n_c=n_c, energy=energy, level=level, z0=z0)


def additive_capacity_waterfilled(mu: float, n_c: float, energy: float) -> CapacityResult:
    """
    Additive-noise capacity for any E > 0, keeping the positive part of N(z).

    Equals additive_capacity once E reaches the positivity threshold.
    """
    distribution = additive_distribution(mu, n_c, energy)
    if distribution.z0 == 0:
        entropy, error = _noise_entropy(mu, n_c)
        value = g(distribution.level) - entropy
    else:
        level = distribution.level
        quad = integrate(lambda z: g(level) - g(additive_noise_profile(mu, n_c, z)),
                         distribution.z0, TWO_PI)
        value, error = quad.value / TWO_PI, quad.error_estimate / TWO_PI
    return CapacityResult(nats_per_use=max(value, 0.0), quadrature_error=error,
                          method=CapacityMethod.ADDITIVE_LIMIT)
