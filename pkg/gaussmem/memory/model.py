"""
Finite-n memory channel: the per-use recursion, the closed-form M^(n),
its spectrum and the additive-noise covariance limit.
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from gaussmem.channel.memoryless import classify
from gaussmem.config import settings
from gaussmem.errors import DomainError, ResourceError
from gaussmem.models.channel import ChannelParams, Threshold
from gaussmem.models.results import DivergentEigenvalue, FiniteSpectrum, ModeTransform
from gaussmem.numerics.kernel import sym_eigenvalues

logger = logging.getLogger(__name__)


def _check_uses(n: int, max_n: Optional[int] = None) -> None:
    max_n = settings.max_n if max_n is None else max_n
    if n < 1:
        raise DomainError(f"Number of channel uses must be >= 1, got {n}")
    if n > max_n:
        raise ResourceError(f"n = {n} exceeds the matrix size cap {max_n} (GAUSSMEM_MAX_N)")


def build_mode_transform(params: ChannelParams, n: int,
                         max_n: Optional[int] = None) -> ModeTransform:
    """
    Propagate mode coefficients through n uses of the memory channel.

    Each use mixes the memory with a fresh environment mode through a beam
    splitter of transmissivity mu, then applies the attenuator or amplifier
    of gain kappa to the input and the mixed memory. The complementary port
    becomes the memory of the next use; the initial memory is environment
    mode 0.

    For amplifiers the memory carries input creation operators, so its input
    coefficients are tracked on a^dagger and the outputs couple to the
    environment creation operators.

    Args:
        params: Channel parameters
        n: Number of channel uses
        max_n: Matrix size cap (defaults to settings.max_n)

    Returns:
        ModeTransform with A (n x n) and E (n x (n+1))

    Raises:
        DomainError: If n < 1
        ResourceError: If n exceeds the cap
    """
    _check_uses(n, max_n)
    kappa, mu = params.kappa, params.mu
    amplifier = kappa > 1
    sqrt_mu, sqrt_mu_c = math.sqrt(mu), math.sqrt(1 - mu)
    sqrt_k, sqrt_k_c = math.sqrt(kappa), math.sqrt(abs(1 - kappa))
    sign = 1.0 if amplifier else -1.0

    a_matrix = np.zeros((n, n))
    e_matrix = np.zeros((n, n + 1))
    memory_in = np.zeros(n)
    memory_env = np.zeros(n + 1)
    memory_env[0] = 1.0

    for j in range(n):
        mixed_in = sqrt_mu * memory_in
        mixed_env = sqrt_mu * memory_env
        mixed_env[j + 1] += sqrt_mu_c

        a_matrix[j] = sign * sqrt_k_c * mixed_in
        a_matrix[j, j] += sqrt_k
        e_matrix[j] = sqrt_k_c * mixed_env

        memory_in = sqrt_k * mixed_in
        memory_in[j] += sqrt_k_c
        memory_env = sqrt_k * mixed_env

    return ModeTransform(a_matrix=a_matrix, e_matrix=e_matrix, regime=classify(params))


def inverse_input_matrix(params: ChannelParams, n: int,
                         max_n: Optional[int] = None) -> np.ndarray:
    """
    A^-1 for an amplifier, from the inverted recursion.

    Inverting a use gives a_j = a'_j / sqrt(kappa) - sqrt((kappa-1)/kappa) m~_j^dagger,
    with the memory shrinking by sqrt(mu/kappa) per use, so the entries stay
    bounded where those of A grow geometrically.
    """
    _check_uses(n, max_n)
    kappa, mu = params.kappa, params.mu
    if kappa <= 1:
        raise DomainError(f"Inverse recursion is defined for amplifiers only, got kappa={kappa}")
    direct = 1.0 / math.sqrt(kappa)
    through_memory = math.sqrt((kappa - 1) / kappa)
    sqrt_mu = math.sqrt(mu)

    inverse = np.zeros((n, n))
    memory = np.zeros(n)
    for j in range(n):
        mixed = sqrt_mu * memory
        inverse[j] = -through_memory * mixed
        inverse[j, j] += direct
        memory = direct * mixed
        memory[j] += through_memory
    return inverse


def _kappa_diagonal(params: ChannelParams, n: int) -> np.ndarray:
    """kappa_m = kappa + mu (kappa-1)^2 sum_{h=0}^{m-2} (mu kappa)^h for m = 1..n"""
    with np.errstate(over="ignore"):
        powers = params.product ** np.arange(max(n - 1, 0))
    partial = np.concatenate(([0.0], np.cumsum(powers)))
    return params.kappa + params.mu * (params.kappa - 1) ** 2 * partial


def closed_form_M(params: ChannelParams, n: int) -> np.ndarray:
    """
    Closed-form M^(n) = A A^T.

    M_jj' = delta_jj' + (kappa_jj' - 1) sqrt(mu kappa)^|j-j'| with kappa_jj'
    depending on min(j, j'); at mu*kappa = 1 the linear-growth form
    delta_jj' + (1-mu) + ((1-mu)^2/mu) min(j, j') is used.
    """
    if n < 1:
        raise DomainError(f"Number of channel uses must be >= 1, got {n}")
    index = np.arange(1, n + 1)
    smaller = np.minimum.outer(index, index)
    distance = np.abs(np.subtract.outer(index, index))
    mu = params.mu

    if params.product == 1:
        return np.eye(n) + (1 - mu) + ((1 - mu) ** 2 / mu) * smaller

    kappa_jj = _kappa_diagonal(params, n)[smaller - 1]
    with np.errstate(over="ignore"):
        return np.eye(n) + (kappa_jj - 1) * math.sqrt(params.product) ** distance


def _trace(params: ChannelParams, n: int) -> Tuple[float, float]:
    """tr M^(n) above threshold and its logarithm; the trace itself may overflow to inf"""
    kappa, ratio = params.kappa, params.product
    weight = params.mu * (kappa - 1) ** 2 / (ratio - 1)
    log_growth = n * math.log(ratio)
    if log_growth < settings.exp_overflow:
        trace = n * kappa + weight * ((ratio ** n - 1) / (ratio - 1) - n)
        return trace, math.log(trace)
    return math.inf, math.log(weight) - math.log(ratio - 1) + log_growth


def _above_threshold_spectrum(params: ChannelParams, n: int, regime) -> FiniteSpectrum:
    inverse = inverse_input_matrix(params, n)
    reciprocal = sym_eigenvalues(inverse.T @ inverse)
    bulk = np.sort(1.0 / reciprocal[1:])

    trace, log_trace = _trace(params, n)
    bulk_sum = float(np.sum(bulk))
    if math.isfinite(trace):
        value = trace - bulk_sum
        log_value = math.log(value)
    else:
        value = math.inf
        log_value = log_trace + math.log1p(-bulk_sum * math.exp(-log_trace))
        logger.info(f"Divergent eigenvalue at n={n} exceeds double range: log c = {log_value:.6g}")

    eigenvalues = np.append(bulk, value)
    divergent = DivergentEigenvalue(value=value, log_value=log_value, index=n - 1)
    return FiniteSpectrum(eigenvalues=eigenvalues, regime=regime, divergent=divergent)


def finite_spectrum(params: ChannelParams, n: int,
                    max_n: Optional[int] = None) -> FiniteSpectrum:
    """
    Normal-mode gains eta_j^(n): the ascending eigenvalues of M^(n).

    Above threshold the largest eigenvalue is flagged as divergent. There the
    bulk comes from M^-1 = A^-T A^-1 and the divergent value from the trace
    identity, since M^(n) itself has entries of order (mu kappa)^n.

    Raises:
        DomainError: If n < 1
        ResourceError: If n exceeds the cap
    """
    _check_uses(n, max_n)
    regime = classify(params)
    if regime.threshold == Threshold.ABOVE:
        return _above_threshold_spectrum(params, n, regime)
    eigenvalues = np.clip(sym_eigenvalues(closed_form_M(params, n)), 0.0, None)
    return FiniteSpectrum(eigenvalues=eigenvalues, regime=regime)


def additive_noise_covariance(mu: float, n_c: float, n: int) -> np.ndarray:
    """Added-noise covariance of the additive limit: N_C mu^(|i-j|/2)"""
    if not 0 <= mu <= 1:
        raise DomainError(f"mu must lie in [0, 1], got {mu}")
    if n_c < 0:
        raise DomainError(f"Added noise N_C must be >= 0, got {n_c}")
    if n < 1:
        raise DomainError(f"Number of channel uses must be >= 1, got {n}")
    index = np.arange(n)
    distance = np.abs(np.subtract.outer(index, index))
    return n_c * mu ** (distance / 2.0)


def thermal_noise_covariance(params: ChannelParams, n: int,
                             max_n: Optional[int] = None) -> np.ndarray:
    """N E E^T: the environment contribution to <a'_i^dagger a'_j>"""
    transform = build_mode_transform(params, n, max_n)
    return params.nbar * transform.noise_gram()
