"""
Classical capacity of the memory channel: the asymptotic water-filled
integral, closed forms for the trivial parameter points, finite-P bounds
and the finite-n capacity.
"""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from gaussmem.channel.memoryless import classify, memoryless_capacity
from gaussmem.errors import DomainError, UnsupportedRegimeError
from gaussmem.memory.model import finite_spectrum
from gaussmem.models.channel import ChannelKind, ChannelParams, Threshold
from gaussmem.models.results import (
    TWO_PI,
    BoundsPair,
    CapacityMethod,
    CapacityResult,
)
from gaussmem.numerics.kernel import g, integrate
from gaussmem.spectrum.asymptotic import eta_of_z
from gaussmem.waterfill.solver import discrete_distribution, mode_photons, optimal_distribution

logger = logging.getLogger(__name__)


def _require_energy(energy: float) -> None:
    if not math.isfinite(energy) or energy < 0:
        raise DomainError(f"Energy must be finite and >= 0, got {energy}")


def special_case_capacity(params: ChannelParams, energy: float) -> Optional[float]:
    """
    Closed-form capacity at the trivial parameter points, None elsewhere.

    kappa = 1 or mu = 1 is the identity channel, mu = 0 the memoryless
    channel of gain kappa, and kappa = 0 a memoryless attenuator of
    transmissivity mu. Matching is by exact equality.
    """
    _require_energy(energy)
    if params.kappa == 1 or params.mu == 1:
        return g(energy)
    if params.mu == 0:
        return memoryless_capacity(params.kappa, params.nbar, energy)
    if params.kappa == 0:
        return memoryless_capacity(params.mu, params.nbar, energy)
    return None


def amplifier_limit(mu: float, nbar: float, energy: float) -> float:
    """Capacity as kappa -> inf, where eta(z) -> 1/mu uniformly"""
    _require_energy(energy)
    if not 0 < mu <= 1:
        raise DomainError(f"Infinite-gain limit needs mu in (0, 1], got {mu}")
    noise = (1 - mu) / mu * (nbar + 1)
    return max(g(energy / mu + noise) - g(noise), 0.0)


def asymptotic_capacity(params: ChannelParams, energy: float,
                        use_special_cases: bool = True) -> CapacityResult:
    """
    Capacity per use in the limit of many uses.

    Integrates the memoryless capacity of each normal mode eta(z) loaded with
    the water-filled photon number N(z). Modes below the cutoff z0 carry no
    photons and contribute nothing, so the integral starts at z0.

    Args:
        params: Channel parameters
        energy: Mean photons per use, >= 0
        use_special_cases: Return closed forms at the trivial parameter points

    Returns:
        CapacityResult in nats per use

    Raises:
        DomainError: If energy is negative
        UnsupportedRegimeError: At mu*kappa = 1 away from the identity channel
        SolverError: If the water-filling solve fails
    """
    _require_energy(energy)
    if use_special_cases:
        closed = special_case_capacity(params, energy)
        if closed is not None:
            return CapacityResult(nats_per_use=closed, method=CapacityMethod.SPECIAL_CASE)

    if classify(params).threshold == Threshold.AT:
        raise UnsupportedRegimeError(
            f"Asymptotic capacity is not available at mu*kappa = 1 (kappa={params.kappa}, mu={params.mu})"
        )
    if energy == 0:
        return CapacityResult(nats_per_use=0.0, method=CapacityMethod.INTEGRAL)

    distribution = optimal_distribution(params, energy)
    if distribution.z0 >= TWO_PI:
        return CapacityResult(nats_per_use=0.0, method=CapacityMethod.INTEGRAL,
                              distribution=distribution)

    def rate(z: float) -> float:
        return memoryless_capacity(eta_of_z(params, z), params.nbar, mode_photons(distribution, z))

    quad = integrate(rate, distribution.z0, TWO_PI)
    return CapacityResult(
        nats_per_use=max(quad.value / TWO_PI, 0.0),
        quadrature_error=quad.error_estimate / TWO_PI,
        method=CapacityMethod.INTEGRAL,
        distribution=distribution,
    )


def _waterfilled_rate(etas: Sequence[float], nbar: float, energy: float) -> float:
    if energy == 0:
        return 0.0
    distribution = discrete_distribution(etas, nbar, energy)
    rates = [memoryless_capacity(eta, nbar, photons)
             for eta, photons in zip(distribution.etas, distribution.photons)]
    return sum(rates) / len(rates)


def _group_extremes(bulk: np.ndarray, p_modes: int, ell: int) -> List[Optional[tuple]]:
    """(min, max) of each run of ell consecutive ascending eigenvalues; None for an empty run"""
    extremes = []
    for p in range(p_modes):
        group = bulk[p * ell:(p + 1) * ell]
        extremes.append((float(group[0]), float(group[-1])) if len(group) else None)
    return extremes


def finite_P_bounds(params: ChannelParams, energy: float, p_modes: int,
                    ell_list: Sequence[int]) -> BoundsPair:
    """
    Lower and upper capacity bounds from P groups of normal modes.

    For each ell the ascending spectrum of n = ell*P uses (divergent
    eigenvalue dropped) is cut into P runs of ell. Each group is then
    replaced by its smallest or largest gain, taken over all ell, and the
    resulting P-mode channel is water-filled. Attenuator capacity grows
    with eta and amplifier capacity shrinks with it, so the roles of the
    two gain lists swap between the regimes.

    Raises:
        DomainError: For P < 1, an empty ell_list or ell < 1
        UnsupportedRegimeError: At mu*kappa = 1
        ResourceError: If ell*P exceeds the matrix size cap
    """
    _require_energy(energy)
    if p_modes < 1:
        raise DomainError(f"P must be >= 1, got {p_modes}")
    if not ell_list or any(ell < 1 for ell in ell_list):
        raise DomainError(f"ell values must be >= 1, got {list(ell_list)}")
    regime = classify(params)
    if regime.threshold == Threshold.AT:
        raise UnsupportedRegimeError("Finite-P bounds need mu*kappa != 1")

    lows = [math.inf] * p_modes
    highs = [-math.inf] * p_modes
    for ell in ell_list:
        spectrum = finite_spectrum(params, ell * p_modes)
        for p, extremes in enumerate(_group_extremes(spectrum.bulk, p_modes, ell)):
            if extremes is None:
                continue
            lows[p] = min(lows[p], extremes[0])
            highs[p] = max(highs[p], extremes[1])
    if any(math.isinf(low) for low in lows):
        raise DomainError(f"Some of the {p_modes} groups received no eigenvalues; use larger ell")

    if regime.kind == ChannelKind.AMPLIFIER:
        lower_etas, upper_etas = highs, lows
    else:
        lower_etas, upper_etas = lows, highs

    lower = _waterfilled_rate(lower_etas, params.nbar, energy)
    upper = _waterfilled_rate(upper_etas, params.nbar, energy)
    logger.debug(f"P={p_modes} ell={list(ell_list)}: [{lower:.10g}, {upper:.10g}]")
    return BoundsPair(lower=lower, upper=upper, p_modes=p_modes,
                      ell_list=list(ell_list), lower_etas=lower_etas, upper_etas=upper_etas)


def finite_capacity(params: ChannelParams, energy: float, n: int) -> CapacityResult:
    """
    Gaussian-encoding capacity per use of exactly n uses.

    Water-fills the n normal modes of M^(n). A divergent eigenvalue that
    overflows double range is left out and the remaining modes share the
    energy budget.
    """
    _require_energy(energy)
    spectrum = finite_spectrum(params, n)
    etas = spectrum.eigenvalues
    if spectrum.divergent is not None and math.isinf(spectrum.divergent.value):
        logger.info(f"Dropping overflowing divergent mode at n={n}")
        etas = spectrum.bulk
    if len(etas) == 0:
        raise DomainError(f"No finite normal modes at n={n}")
    rate = _waterfilled_rate([float(eta) for eta in etas], params.nbar, energy)
    return CapacityResult(nats_per_use=rate, method=CapacityMethod.FINITE_SPECTRUM)
