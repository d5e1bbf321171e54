import logging

import numpy as np

from gaussmem.capacity.additive import (
    additive_capacity,
    additive_capacity_waterfilled,
    additive_distribution,
    additive_threshold,
)
from gaussmem.capacity.capacity import asymptotic_capacity, finite_capacity, finite_P_bounds
from gaussmem.errors import UsageError
from gaussmem.memory.model import finite_spectrum
from gaussmem.models.options import RunOptions
from gaussmem.models.results import TWO_PI
from gaussmem.numerics.kernel import g
from gaussmem.output.writer import Table
from gaussmem.spectrum.asymptotic import eta_of_z
from gaussmem.waterfill.solver import mode_photons, optimal_distribution

logger = logging.getLogger(__name__)


def z_grid(steps: int) -> np.ndarray:
    return np.linspace(0.0, TWO_PI, steps)


def spectrum_rows(options: RunOptions, n: int) -> Table:
    """Ascending eigenvalues of M^(n), with the divergent one flagged and given in log form"""
    spectrum = finite_spectrum(options.channel(), n)
    divergent = spectrum.divergent
    table = Table(columns=["j", "eta", "log_eta", "divergent"])
    for j, eta in enumerate(spectrum.eigenvalues, start=1):
        flagged = divergent is not None and divergent.index == j - 1
        log_eta = divergent.log_value if flagged else (float(np.log(eta)) if eta > 0 else -np.inf)
        table.rows.append({"j": j, "eta": float(eta), "log_eta": float(log_eta), "divergent": flagged})
    return table


def symbol_rows(options: RunOptions, steps: int) -> Table:
    params = options.channel()
    zs = z_grid(steps)
    etas = eta_of_z(params, zs)
    return Table(columns=["z", "eta"],
                 rows=[{"z": float(z), "eta": float(eta)} for z, eta in zip(zs, etas)])


def capacity(options: RunOptions) -> Table:
    """Asymptotic capacity, or the n-use capacity when --n is given"""
    options.require("energy")
    params = options.channel()
    if options.n is not None:
        result = finite_capacity(params, options.energy, options.n)
    else:
        result = asymptotic_capacity(params, options.energy, use_special_cases=not options.no_special)
    z0_fraction = result.distribution.z0_fraction if result.distribution else 0.0
    return Table(
        columns=["kappa", "mu", "nbar", "energy", "capacity_nats", "quadrature_error",
                 "z0_fraction", "method"],
        rows=[{
            "kappa": params.kappa, "mu": params.mu, "nbar": params.nbar, "energy": options.energy,
            "capacity_nats": result.nats_per_use, "quadrature_error": result.quadrature_error,
            "z0_fraction": z0_fraction, "method": result.method.value,
        }],
    )


def spectrum(options: RunOptions) -> Table:
    """Finite spectrum with --n, otherwise eta(z) on --steps points"""
    if options.n is not None:
        return spectrum_rows(options, options.n)
    return symbol_rows(options, options.steps or options.z_steps)


def waterfill(options: RunOptions) -> Table:
    options.require("energy")
    params = options.channel()
    distribution = optimal_distribution(params, options.energy)
    logger.info(f"lambda={distribution.lam:.10g} z0={distribution.z0:.10g}")
    table = Table(columns=["z", "eta", "n_of_z", "z0", "lambda"])
    for z in z_grid(options.steps or options.z_steps):
        table.rows.append({
            "z": float(z),
            "eta": float(eta_of_z(params, float(z))),
            "n_of_z": mode_photons(distribution, float(z)),
            "z0": distribution.z0,
            "lambda": distribution.lam,
        })
    return table


def additive(options: RunOptions) -> Table:
    """Additive-noise capacity; --clipped keeps the positive part below the threshold"""
    options.require("mu", "nc", "energy")
    mu, n_c, energy = options.mu, options.nc, options.energy
    if options.clipped:
        result = additive_capacity_waterfilled(mu, n_c, energy)
        distribution = additive_distribution(mu, n_c, energy)
        level, z0 = distribution.level, distribution.z0
    else:
        result = additive_capacity(mu, n_c, energy)
        level, z0 = n_c + energy, 0.0
    return Table(
        columns=["mu", "nc", "energy", "threshold", "capacity_nats", "memoryless_nats",
                 "quadrature_error", "level", "z0"],
        rows=[{
            "mu": mu, "nc": n_c, "energy": energy, "threshold": additive_threshold(mu, n_c),
            "capacity_nats": result.nats_per_use, "memoryless_nats": g(energy + n_c) - g(n_c),
            "quadrature_error": result.quadrature_error, "level": level, "z0": z0,
        }],
    )


def bounds(options: RunOptions) -> Table:
    options.require("energy", "p")
    if not options.ell:
        raise UsageError("bounds requires --ell")
    pair = finite_P_bounds(options.channel(), options.energy, options.p, options.ell)
    return Table(
        columns=["p_modes", "ell_list", "lower_nats", "upper_nats", "width"],
        rows=[{
            "p_modes": pair.p_modes,
            "ell_list": " ".join(str(ell) for ell in pair.ell_list),
            "lower_nats": pair.lower, "upper_nats": pair.upper, "width": pair.width,
        }],
    )
