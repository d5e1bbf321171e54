import math

import numpy as np
import pytest

from gaussmem.config import settings
from gaussmem.errors import DomainError, UnsupportedRegimeError
from gaussmem.models.channel import ChannelParams
from gaussmem.models.results import TWO_PI
from gaussmem.spectrum.asymptotic import eta_of_z
from gaussmem.waterfill.solver import (
    constrained_energy,
    critical_energy,
    critical_temperature,
    discrete_distribution,
    high_temperature_cutoff,
    mode_photons,
    optimal_distribution,
    solve_lambda,
    unconstrained_N,
)


def _random_params(rng):
    """Off-threshold channels with moderate gains on both sides of kappa = 1"""
    while True:
        if rng.uniform() < 0.5:
            kappa, mu = rng.uniform(0.1, 0.6), rng.uniform(0.7, 0.9)
        else:
            kappa, mu = rng.uniform(1.2, 3.0), rng.uniform(0.1, 0.9)
        if abs(kappa * mu - 1) > 0.05:
            return ChannelParams(kappa=kappa, mu=mu, nbar=rng.uniform(0, 3))


@pytest.mark.parametrize("z", [0.0, 2.0, TWO_PI])
def test_unconstrained_constant_spectrum(z):
    params = ChannelParams(kappa=0.5, mu=0.0)
    assert unconstrained_N(params, z, 0.5 * math.log(1.25)) == pytest.approx(8.0, rel=1e-12)


def test_unconstrained_positive_at_zero_temperature(rng):
    for _ in range(10):
        params = ChannelParams(kappa=rng.uniform(0.1, 0.95), mu=rng.uniform(0, 1))
        z = rng.uniform(1.0, TWO_PI)
        assert unconstrained_N(params, z, rng.uniform(0.01, 1.0)) > 0


def test_unconstrained_large_multiplier_limit(attenuator):
    params = attenuator.with_nbar(2.0)
    eta = eta_of_z(params, 3.0)
    assert unconstrained_N(params, 3.0, 1e6) == pytest.approx(-(1 - eta) * 2.0 / eta, rel=1e-12)


def test_unconstrained_rejects_non_positive_multiplier(attenuator):
    with pytest.raises(DomainError):
        unconstrained_N(attenuator, 1.0, 0.0)


def test_unconstrained_vanishing_gain():
    assert unconstrained_N(ChannelParams(kappa=0.8, mu=0.8), 0.0, 1.0) == -math.inf


@pytest.mark.parametrize("kappa, energy, expected", [
    (0.5, 8.0, 0.5 * math.log(1.25)),
    (1.0, 1.0, math.log(2.0)),
])
def test_lambda_constant_spectrum(kappa, energy, expected):
    lam = solve_lambda(ChannelParams(kappa=kappa, mu=0.0), energy)
    assert lam == pytest.approx(expected, rel=1e-9)


def test_lambda_rejects_bad_energy(attenuator):
    with pytest.raises(DomainError):
        solve_lambda(attenuator, 0.0)
    with pytest.raises(DomainError):
        solve_lambda(attenuator, math.inf)


def test_lambda_rejects_threshold():
    with pytest.raises(UnsupportedRegimeError):
        solve_lambda(ChannelParams(kappa=2.0, mu=0.5), 1.0)


def test_constrained_energy_decreases_with_multiplier(attenuator):
    params = attenuator.with_nbar(1.0)
    energies = [constrained_energy(params, lam) for lam in (0.01, 0.05, 0.1, 0.5, 1.0)]
    assert all(b < a for a, b in zip(energies, energies[1:]))


def test_flat_distribution_for_constant_spectrum():
    distribution = optimal_distribution(ChannelParams(kappa=0.5, mu=0.0, nbar=1.0), 3.0)
    assert distribution.z0 == 0.0
    for z in (0.0, 1.0, 4.0, TWO_PI):
        assert mode_photons(distribution, z) == pytest.approx(3.0, rel=1e-9)


def test_cutoff_below_critical_temperature(attenuator):
    distribution = optimal_distribution(attenuator.with_nbar(0.5), 8.0)
    assert distribution.z0 == 0.0
    assert mode_photons(distribution, 0.0) > 0


def test_cutoff_above_critical_temperature(attenuator):
    distribution = optimal_distribution(attenuator.with_nbar(1.2), 8.0)
    assert 0 < distribution.z0 < TWO_PI
    assert distribution.z0_fraction == pytest.approx(distribution.z0 / TWO_PI)
    assert mode_photons(distribution, distribution.z0 / 2) == 0.0
    assert mode_photons(distribution, TWO_PI) > 0


def test_random_distributions_meet_constraints(rng, monkeypatch):
    monkeypatch.setattr(settings, "cutoff_tol", 1e-13)
    for _ in range(20):
        params = _random_params(rng)
        energy = rng.uniform(1, 10)
        distribution = optimal_distribution(params, energy)

        assert distribution.achieved_energy == pytest.approx(energy, rel=1e-8)
        values = np.array([mode_photons(distribution, float(z)) for z in np.linspace(0.0, TWO_PI, 1000)])
        assert np.all(values >= 0)
        assert np.all(np.diff(values) >= -1e-10)
        if 0 < distribution.z0 < TWO_PI:
            assert abs(unconstrained_N(params, distribution.z0, distribution.lam)) < 1e-8
            assert mode_photons(distribution, min(distribution.z0 + 1e-3, TWO_PI)) > 0


def test_discrete_distribution_equal_gains():
    distribution = discrete_distribution([0.5, 0.5], 0.0, 8.0)
    assert distribution.photons == pytest.approx([8.0, 8.0], rel=1e-9)
    assert distribution.lam == pytest.approx(0.5 * math.log(1.25), rel=1e-9)


def test_discrete_distribution_skips_dead_mode():
    distribution = discrete_distribution([0.0, 1.0], 0.0, 1.0)
    assert distribution.photons[0] == 0.0
    assert distribution.photons[1] == pytest.approx(2.0, rel=1e-9)
    assert distribution.lam == pytest.approx(math.log(1.5), rel=1e-9)


def test_discrete_distribution_favours_better_modes():
    distribution = discrete_distribution([0.2, 0.5, 0.9], 1.0, 2.0)
    photons = distribution.photons
    assert photons[0] <= photons[1] <= photons[2]
    assert sum(photons) / 3 == pytest.approx(2.0, rel=1e-9)


@pytest.mark.parametrize("etas", [[], [0.5, -0.1], [0.0, 0.0], [math.inf]])
def test_discrete_distribution_rejects_gains(etas):
    with pytest.raises(DomainError):
        discrete_distribution(etas, 0.0, 1.0)


def test_critical_temperature_attenuator(attenuator):
    assert critical_temperature(attenuator.kappa, attenuator.mu, 8.0) == pytest.approx(0.8, abs=0.1)


def test_critical_temperature_amplifier(amplifier):
    assert critical_temperature(amplifier.kappa, amplifier.mu, 8.0) == pytest.approx(9.8, abs=0.3)


def test_critical_temperature_grows_with_energy(attenuator):
    values = [critical_temperature(attenuator.kappa, attenuator.mu, energy) for energy in (4.0, 8.0, 16.0)]
    assert values[0] < values[1] < values[2]


def test_critical_temperature_edge_cases():
    assert critical_temperature(0.8, 0.8, 8.0) == 0.0
    assert critical_temperature(0.0, 0.5, 8.0) == math.inf
    assert critical_temperature(1.0, 0.5, 8.0) == math.inf
    assert critical_temperature(0.5, 0.0, 8.0) == math.inf
    with pytest.raises(UnsupportedRegimeError):
        critical_temperature(2.0, 0.5, 8.0)


def test_critical_temperature_separates_cutoff_regimes(attenuator):
    n_crit = critical_temperature(attenuator.kappa, attenuator.mu, 8.0)
    below = optimal_distribution(attenuator.with_nbar(0.9 * n_crit), 8.0)
    above = optimal_distribution(attenuator.with_nbar(1.1 * n_crit), 8.0)
    assert below.z0 == 0.0
    assert above.z0 > 0.0


@pytest.mark.parametrize("kappa", [0.0, 1.0])
def test_critical_energy_vanishes_at_trivial_points(kappa):
    assert critical_energy(ChannelParams(kappa=kappa, mu=0.8, nbar=0.5)) == pytest.approx(0.0, abs=1e-9)


def test_critical_energy_diverges_at_matching_parameters():
    assert critical_energy(ChannelParams(kappa=0.8, mu=0.8, nbar=0.5)) == math.inf
    assert critical_energy(ChannelParams(kappa=0.8, mu=0.8)) == 0.0


def test_critical_energy_near_divergence():
    assert critical_energy(ChannelParams(kappa=0.799, mu=0.8, nbar=0.5)) > 1e3


def test_critical_energy_inverts_critical_temperature(attenuator):
    n_crit = critical_temperature(attenuator.kappa, attenuator.mu, 8.0)
    assert critical_energy(attenuator.with_nbar(n_crit)) == pytest.approx(8.0, rel=1e-2)


def test_critical_energy_increases_with_temperature(attenuator):
    values = [critical_energy(attenuator.with_nbar(nbar)) for nbar in (0.2, 0.5, 1.0, 2.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_critical_energy_rejects_threshold():
    with pytest.raises(UnsupportedRegimeError):
        critical_energy(ChannelParams(kappa=2.0, mu=0.5, nbar=1.0))


def test_cutoff_nondecreasing_with_temperature(attenuator):
    cutoffs = [optimal_distribution(attenuator.with_nbar(nbar), 8.0).z0 for nbar in (0.5, 1.0, 2.0, 5.0, 100.0)]
    assert all(b >= a for a, b in zip(cutoffs, cutoffs[1:]))
    assert cutoffs[-1] > cutoffs[1]


def test_high_temperature_cutoff(attenuator):
    params = attenuator.with_nbar(1e7)
    z0 = optimal_distribution(params, 8.0).z0
    assert z0 > 0.9 * TWO_PI
    assert high_temperature_cutoff(params, 8.0) == pytest.approx(z0, abs=1e-3)


def test_high_temperature_cutoff_zero_when_budget_covers_band():
    params = ChannelParams(kappa=0.9, mu=0.8, nbar=0.01)
    assert high_temperature_cutoff(params, 100.0) == 0.0
