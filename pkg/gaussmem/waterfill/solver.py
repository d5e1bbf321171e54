"""
Optimal input-energy distribution over the normal modes.

The unconstrained Lagrange solution N~(z, lambda) is nondecreasing in z on
both sides of the threshold, so the clipped distribution max(N~, 0) is zero
on [0, z0) and positive on (z0, 2pi]. Everything here leans on that
ordering: the cutoff is a bisection on z, the multiplier a bisection on
log(lambda) against the energy constraint.
"""
import logging
import math
from typing import Callable, Sequence

from gaussmem.channel.memoryless import added_noise, classify, lagrange_photons
from gaussmem.config import settings
from gaussmem.errors import DomainError, SolverError, UnsupportedRegimeError
from gaussmem.models.channel import ChannelKind, ChannelParams, Threshold
from gaussmem.models.results import (
    TWO_PI,
    Bracket,
    DiscreteDistribution,
    EnergyDistribution,
)
from gaussmem.numerics.kernel import find_root, integrate
from gaussmem.spectrum.asymptotic import eta_of_z

logger = logging.getLogger(__name__)


def _require_off_threshold(params: ChannelParams) -> None:
    if classify(params).threshold == Threshold.AT:
        raise UnsupportedRegimeError("No asymptotic spectrum at mu*kappa = 1")


def _require_positive_energy(energy: float) -> None:
    if not math.isfinite(energy) or energy <= 0:
        raise DomainError(f"Energy must be finite and > 0, got {energy}")


def unconstrained_N(params: ChannelParams, z: float, lam: float) -> float:
    """
    Lagrange photon number N~(z, lambda) of the normal mode at phase z.

    Args:
        params: Channel parameters
        z: Phase in [0, 2pi]
        lam: Lagrange multiplier, > 0

    Returns:
        N~(z, lambda), possibly negative; -inf where eta(z) = 0

    Raises:
        DomainError: If lam <= 0
    """
    if not lam > 0:
        raise DomainError(f"Lagrange multiplier must be > 0, got {lam}")
    return lagrange_photons(eta_of_z(params, z), params.nbar, lam)


def _cutoff(params: ChannelParams, lam: float) -> float:
    """Smallest z with N~(z, lambda) > 0: 0 if the whole band is filled, 2pi if none of it is"""
    def photons(z: float) -> float:
        return unconstrained_N(params, z, lam)

    if photons(0.0) > 0:
        return 0.0
    if photons(TWO_PI) <= 0:
        return TWO_PI
    return find_root(photons, Bracket(lo=0.0, hi=TWO_PI), tol=settings.cutoff_tol)


def constrained_energy(params: ChannelParams, lam: float) -> float:
    """Mean photons per use of the clipped distribution max(N~(z, lambda), 0)"""
    z0 = _cutoff(params, lam)
    if z0 >= TWO_PI:
        return 0.0
    quad = integrate(lambda z: max(unconstrained_N(params, z, lam), 0.0), z0, TWO_PI)
    return quad.value / TWO_PI


def _solve_multiplier(energy_of: Callable[[float], float], energy: float) -> float:
    """
    Bisection on log(lambda) for energy_of(lambda) = energy.

    energy_of must be continuous and decreasing, growing without bound as
    lambda -> 0 and vanishing as lambda -> inf.
    """
    lo = 1.0
    for _ in range(settings.bracket_steps):
        if energy_of(lo) > energy:
            break
        lo /= 2
    else:
        raise SolverError(f"Could not bracket lambda from below for E={energy} (last lambda={lo:.3g})")

    hi = 1.0
    for _ in range(settings.bracket_steps):
        if energy_of(hi) < energy:
            break
        hi *= 2
    else:
        raise SolverError(f"Could not bracket lambda from above for E={energy} (last lambda={hi:.3g})")

    logger.debug(f"lambda bracket [{lo:.6g}, {hi:.6g}] for E={energy}")
    log_lam = find_root(lambda t: energy_of(math.exp(t)) - energy,
                        Bracket(lo=math.log(lo), hi=math.log(hi)))
    return math.exp(log_lam)


def solve_lambda(params: ChannelParams, energy: float) -> float:
    """
    Lagrange multiplier meeting the mean-energy constraint.

    Args:
        params: Channel parameters, off threshold
        energy: Mean photons per use, > 0

    Returns:
        lambda with integral of max(N~, 0) dz/2pi equal to energy

    Raises:
        DomainError: If energy <= 0
        UnsupportedRegimeError: At mu*kappa = 1
        SolverError: If lambda cannot be bracketed
    """
    _require_positive_energy(energy)
    _require_off_threshold(params)
    return _solve_multiplier(lambda lam: constrained_energy(params, lam), energy)


def optimal_distribution(params: ChannelParams, energy: float) -> EnergyDistribution:
    """Water-filled N(z) for the given energy budget"""
    lam = solve_lambda(params, energy)
    z0 = _cutoff(params, lam)
    achieved = constrained_energy(params, lam)

    if z0 > 0 and params.nbar == 0 and classify(params).kind == ChannelKind.AMPLIFIER:
        logger.info(
            f"Zero-temperature amplifier distribution clipped on [0, {z0:.6g}) "
            f"for kappa={params.kappa}, mu={params.mu}, E={energy}"
        )

    return EnergyDistribution(params=params, lam=lam, z0=z0, energy=energy,
                              achieved_energy=achieved)


def mode_photons(distribution: EnergyDistribution, z: float) -> float:
    """N(z) of a water-filled distribution: zero below the cutoff"""
    if z < distribution.z0:
        return 0.0
    return max(unconstrained_N(distribution.params, z, distribution.lam), 0.0)


def discrete_distribution(etas: Sequence[float], nbar: float, energy: float) -> DiscreteDistribution:
    """
    Water-filling over a finite list of mode gains.

    The photon numbers average to energy: (1/P) sum_p N_p = E.
    """
    _require_positive_energy(energy)
    if len(etas) == 0:
        raise DomainError("Need at least one mode gain")
    if any(eta < 0 or not math.isfinite(eta) for eta in etas):
        raise DomainError("Mode gains must be finite and >= 0")
    if all(eta == 0 for eta in etas):
        raise DomainError("All mode gains are zero, no energy can be carried")

    def photons(lam: float) -> list:
        return [max(lagrange_photons(eta, nbar, lam), 0.0) for eta in etas]

    def mean_energy(lam: float) -> float:
        return sum(photons(lam)) / len(etas)

    lam = _solve_multiplier(mean_energy, energy)
    return DiscreteDistribution(etas=list(etas), photons=photons(lam), lam=lam,
                                nbar=nbar, energy=energy)


def critical_energy(params: ChannelParams) -> float:
    """
    Smallest energy at which every normal mode is used.

    Fixes lambda by N~(0, lambda) = 0, where
    lambda_c = eta(0) ln(1 + 1/noise(0)), then integrates N~ over the band.

    Returns:
        E_crit, or inf when eta(0) = 0 and N > 0

    Raises:
        UnsupportedRegimeError: At mu*kappa = 1
    """
    _require_off_threshold(params)
    eta0 = eta_of_z(params, 0.0)
    if eta0 == 0:
        return math.inf if params.nbar > 0 else 0.0
    noise0 = added_noise(eta0, params.nbar)
    if noise0 == 0:
        return 0.0

    lam = eta0 * math.log1p(1.0 / noise0)
    quad = integrate(lambda z: max(unconstrained_N(params, z, lam), 0.0), 0.0, TWO_PI)
    return quad.value / TWO_PI


def critical_temperature(kappa: float, mu: float, energy: float) -> float:
    """
    Environment temperature at which the cutoff z0 leaves zero.

    N_crit is where E_crit(N) crosses the energy budget: below it the budget
    exceeds E_crit and z0 = 0, above it z0 > 0.

    Args:
        kappa: Gain or transmissivity
        mu: Memory transmissivity
        energy: Mean photons per use, > 0

    Returns:
        N_crit in photons; 0 when any N > 0 is supercritical, inf when the
        spectrum is flat and z0 never leaves zero
    """
    _require_positive_energy(energy)
    params = ChannelParams(kappa=kappa, mu=mu)
    _require_off_threshold(params)

    if kappa == mu:
        return 0.0
    if mu == 0 or mu == 1 or kappa in (0.0, 1.0):
        return math.inf

    def surplus(nbar: float) -> float:
        return energy - critical_energy(params.with_nbar(nbar))

    if surplus(0.0) <= 0:
        logger.info(f"Distribution clipped already at N=0 for kappa={kappa}, mu={mu}, E={energy}")
        return 0.0

    hi = 1.0
    while surplus(hi) > 0:
        if hi >= settings.max_nbar:
            logger.warning(f"No critical temperature below N={settings.max_nbar:g}")
            return math.inf
        hi *= 2
    lo = hi / 2 if hi > 1 else 0.0
    logger.debug(f"N_crit bracket [{lo:g}, {hi:g}]")
    return find_root(surplus, Bracket(lo=lo, hi=hi), tol=settings.critical_tol)


def high_temperature_cutoff(params: ChannelParams, energy: float) -> float:
    """
    Large-N estimate of the cutoff z0.

    For N >> E the multiplier term is flat across the filled band, so z0
    solves E = integral over [z0, 2pi] of (w(z0) - w(z)) dz/2pi with
    w(z) = noise(eta(z)) / eta(z).
    """
    _require_positive_energy(energy)
    _require_off_threshold(params)

    def penalty(z: float) -> float:
        eta = eta_of_z(params, z)
        if eta == 0:
            return math.inf
        return added_noise(eta, params.nbar) / eta

    def excess(z0: float) -> float:
        if z0 >= TWO_PI:
            return -energy
        level = penalty(z0)
        if math.isinf(level):
            return math.inf
        quad = integrate(lambda z: level - penalty(z), z0, TWO_PI)
        return quad.value / TWO_PI - energy

    if excess(0.0) <= 0:
        return 0.0
    return find_root(excess, Bracket(lo=0.0, hi=TWO_PI), tol=settings.cutoff_tol)
