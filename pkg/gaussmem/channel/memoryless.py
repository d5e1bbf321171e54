"""Memoryless phase-insensitive single-mode channels."""
import math

from gaussmem.config import settings
from gaussmem.errors import DomainError
from gaussmem.models.channel import ChannelKind, ChannelParams, Regime, Threshold
from gaussmem.numerics.kernel import g


def _check_non_negative(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value) or value < 0:
            raise DomainError(f"{name} must be finite and >= 0, got {value}")


def added_noise(eta: float, nbar: float) -> float:
    """Output photons contributed by the environment: (1-eta)N for eta <= 1, (eta-1)(N+1) above"""
    if eta <= 1:
        return (1 - eta) * nbar
    return (eta - 1) * (nbar + 1)


def memoryless_capacity(eta: float, nbar: float, energy: float) -> float:
    """
    Energy-constrained classical capacity of a thermal attenuator (eta <= 1)
    or amplifier (eta > 1), in nats per use.

    Args:
        eta: Transmissivity or gain
        nbar: Mean photon number of the thermal environment
        energy: Mean input photon number

    Returns:
        Capacity in nats per use, >= 0

    Raises:
        DomainError: If any argument is negative or not finite
    """
    _check_non_negative(eta=eta, nbar=nbar, energy=energy)
    if eta == 1:
        return g(energy)
    noise = added_noise(eta, nbar)
    return max(g(eta * energy + noise) - g(noise), 0.0)


def lagrange_photons(eta: float, nbar: float, lam: float) -> float:
    """
    Unconstrained Lagrange-multiplier photon number of a single mode of gain eta.

    Solves eta * g'(eta*N + noise) = lam for N. The result may be negative.

    Returns:
        The photon number, or -inf when eta = 0 (the mode carries no signal)
    """
    if eta == 0:
        return -math.inf
    x = lam / eta
    occupation = 0.0 if x > settings.exp_overflow else 1.0 / math.expm1(x)
    return (occupation - added_noise(eta, nbar)) / eta


def compose(eta1: float, eta2: float) -> float:
    """Gain of two channels in series sharing the same thermal environment"""
    _check_non_negative(eta1=eta1, eta2=eta2)
    return eta1 * eta2


def classify(params: ChannelParams) -> Regime:
    """Channel kind from kappa and threshold side from the sign of mu*kappa - 1"""
    if params.kappa == 1:
        kind = ChannelKind.IDENTITY
    elif params.kappa < 1:
        kind = ChannelKind.ATTENUATOR
    else:
        kind = ChannelKind.AMPLIFIER

    product = params.product
    if product == 1:
        threshold = Threshold.AT
    elif product < 1:
        threshold = Threshold.BELOW
    else:
        threshold = Threshold.ABOVE
    return Regime(kind=kind, threshold=threshold)
