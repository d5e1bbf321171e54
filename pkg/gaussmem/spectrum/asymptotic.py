"""
Asymptotic spectral symbol eta(z), Toeplitz truncations, Szego-limit checks
and the kappa <-> mu duality.
"""
import logging
import math
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import toeplitz

from gaussmem.channel.memoryless import classify
from gaussmem.errors import DomainError, SingularPointError, UnsupportedRegimeError
from gaussmem.memory.model import finite_spectrum
from gaussmem.models.channel import ChannelParams, Threshold
from gaussmem.models.results import TWO_PI, AsymptoticSpectrum, SzegoReport
from gaussmem.numerics.kernel import integrate

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def eta_of_z(params: ChannelParams, z: ArrayLike) -> ArrayLike:
    """
    Effective gain of the normal mode at phase z.

    eta(z) = (kappa + mu - 2 sqrt(kappa mu) cos(z/2)) / (1 + kappa mu - 2 sqrt(kappa mu) cos(z/2)),
    evaluated as ((sqrt(kappa) - sqrt(mu))^2 + 4p s) / ((1 - p)^2 + 4p s) with
    p = sqrt(kappa mu) and s = sin^2(z/4), which is exact at kappa = mu, z = 0.
    The same expression holds on both sides of the threshold.

    Args:
        params: Channel parameters
        z: Phase in [0, 2pi], scalar or array

    Returns:
        eta(z), with the same shape as z

    Raises:
        DomainError: If z lies outside [0, 2pi]
        SingularPointError: At mu*kappa = 1, z = 0
    """
    sqrt_k, sqrt_m = math.sqrt(params.kappa), math.sqrt(params.mu)
    p = sqrt_k * sqrt_m
    offset_num = (sqrt_k - sqrt_m) ** 2
    offset_den = (1 - p) ** 2

    if np.ndim(z) == 0:
        z = float(z)
        if not 0 <= z <= TWO_PI:
            raise DomainError(f"z must lie in [0, 2pi], got {z}")
        s = 4 * p * math.sin(z / 4) ** 2
        den = offset_den + s
        if den == 0:
            raise SingularPointError("eta(z) is singular at mu*kappa = 1, z = 0")
        return (offset_num + s) / den

    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(z > TWO_PI):
        raise DomainError("z must lie in [0, 2pi]")
    s = 4 * p * np.sin(z / 4) ** 2
    den = offset_den + s
    if np.any(den == 0):
        raise SingularPointError("eta(z) is singular at mu*kappa = 1, z = 0")
    return (offset_num + s) / den


def asymptotic_spectrum(params: ChannelParams) -> AsymptoticSpectrum:
    # d eta / d sin^2(z/4) has the sign of (1 - kappa)(1 - mu)
    slope = (1 - params.kappa) * (1 - params.mu)
    if params.product == 0 or slope == 0:
        direction = "flat"
    elif slope > 0:
        direction = "increasing"
    else:
        direction = "decreasing"
    return AsymptoticSpectrum(params=params, monotone_direction=direction)


def dual_params(params: ChannelParams) -> ChannelParams:
    """
    Parameters with the same eta(z).

    Attenuators swap kappa and mu; amplifiers map to (kappa' = 1/mu, mu' = 1/kappa),
    which moves an above-threshold channel below threshold.

    Raises:
        DomainError: For an amplifier with mu = 0
    """
    if params.kappa <= 1:
        return ChannelParams(kappa=params.mu, mu=params.kappa, nbar=params.nbar)
    if params.mu == 0:
        raise DomainError("Amplifier duality needs mu > 0")
    return ChannelParams(kappa=1 / params.mu, mu=1 / params.kappa, nbar=params.nbar)


def szego_check(params: ChannelParams, f: Callable[[float], float], n: int,
                tol: Optional[float] = None) -> SzegoReport:
    """
    Compare the eigenvalue average (1/n) sum f(eta_j^(n)) with the integral of f(eta(z)) dz/2pi.

    Above threshold the divergent eigenvalue is left out of the average.

    Raises:
        UnsupportedRegimeError: At mu*kappa = 1
        DomainError: Above threshold with n = 1, where only the divergent eigenvalue exists
    """
    regime = classify(params)
    if regime.threshold == Threshold.AT:
        raise UnsupportedRegimeError("No asymptotic spectrum at mu*kappa = 1")

    spectrum = finite_spectrum(params, n)
    values = spectrum.bulk
    if len(values) == 0:
        raise DomainError(f"No bulk eigenvalues at n = {n}: need n >= 2 above threshold")
    discrete_mean = float(np.mean([f(float(v)) for v in values]))
    quad = integrate(lambda z: f(eta_of_z(params, z)), 0.0, TWO_PI, tol=tol)
    integral = quad.value / TWO_PI
    return SzegoReport(
        discrete_mean=discrete_mean,
        integral=integral,
        gap=abs(discrete_mean - integral),
        n_uses=n,
        excluded_divergent=spectrum.divergent is not None,
    )


def toeplitz_truncation(params: ChannelParams, n: int) -> np.ndarray:
    """
    n x n truncation of the limiting Toeplitz matrix.

    Below threshold: delta - ((1-mu)(1-kappa)/(1-kappa mu)) sqrt(mu kappa)^|d|.
    Above threshold: delta + ((1-mu)(kappa-1)/(mu kappa-1)) sqrt(mu kappa)^-|d|.

    Raises:
        DomainError: At mu*kappa = 1 or for n < 1
    """
    if n < 1:
        raise DomainError(f"Number of channel uses must be >= 1, got {n}")
    product, kappa, mu = params.product, params.kappa, params.mu
    if product == 1:
        raise DomainError("No Toeplitz limit at mu*kappa = 1")
    distance = np.arange(n)
    if product < 1:
        coefficient = -(1 - mu) * (1 - kappa) / (1 - product)
        decay = math.sqrt(product) ** distance
    else:
        coefficient = (1 - mu) * (kappa - 1) / (product - 1)
        decay = (1 / math.sqrt(product)) ** distance
    column = coefficient * decay
    column[0] += 1.0
    return toeplitz(column)


def distribution_gap(params: ChannelParams, eigenvalues: np.ndarray) -> float:
    """
    Largest distance between sorted eigenvalues and eta sampled at the
    midpoint quantiles z_j = 2pi (j - 1/2) / m of the uniform measure.
    """
    values = np.sort(np.asarray(eigenvalues, dtype=float))
    m = len(values)
    if m == 0:
        raise DomainError("No eigenvalues to compare")
    quantiles = TWO_PI * (np.arange(1, m + 1) - 0.5) / m
    samples = np.sort(eta_of_z(params, quantiles))
    return float(np.max(np.abs(values - samples)))
