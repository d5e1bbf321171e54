"""
One-dimensional parameter sweeps for figure data.

Grid points are independent and run in a process pool when more than one
worker is configured; rows come back in grid order either way.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from gaussmem.capacity.capacity import asymptotic_capacity, finite_capacity
from gaussmem.config import settings
from gaussmem.errors import UsageError
from gaussmem.memory.model import finite_spectrum
from gaussmem.models.channel import ChannelParams
from gaussmem.models.options import RunOptions
from gaussmem.models.results import TWO_PI
from gaussmem.models.sweep import SweepQuantity, SweepSpec, SweepVariable
from gaussmem.output.writer import Table
from gaussmem.spectrum.asymptotic import eta_of_z
from gaussmem.waterfill.solver import (
    critical_energy,
    critical_temperature,
    mode_photons,
    optimal_distribution,
)

logger = logging.getLogger(__name__)

Row = Dict[str, Any]

ENERGY_FREE = {SweepQuantity.SPECTRUM, SweepQuantity.E_CRIT}


def build_spec(options: RunOptions) -> SweepSpec:
    """
    Sweep description from the command options.

    The swept parameter may be omitted from the fixed flags; the grid start
    stands in for it.
    """
    options.require("var", "start", "stop", "steps")
    if not options.quantity:
        raise UsageError("sweep requires --quantity")
    try:
        variable = SweepVariable(options.var)
        quantities = [SweepQuantity(q) for q in options.quantity]
    except ValueError as e:
        raise UsageError(str(e))

    fixed = {"kappa": options.kappa, "mu": options.mu, "energy": options.energy}
    if variable.value in fixed and fixed[variable.value] is None:
        fixed[variable.value] = options.start
    if fixed["energy"] is None and all(q in ENERGY_FREE for q in quantities):
        fixed["energy"] = 0.0
    for name, value in fixed.items():
        if value is None:
            raise UsageError(f"sweep over {variable.value} requires --{name}")
    params = ChannelParams(kappa=fixed["kappa"], mu=fixed["mu"], nbar=options.nbar)

    try:
        return SweepSpec(variable=variable, start=options.start, stop=options.stop,
                         steps=options.steps, params=params, energy=fixed["energy"],
                         n_uses=options.n, quantities=quantities, z_steps=options.z_steps)
    except ValidationError as e:
        raise UsageError(f"Invalid sweep: {e.errors()[0]['msg']}")


def _point(spec: SweepSpec, value: float):
    """Channel parameters, energy and use count at one grid point"""
    params, energy, n_uses = spec.params, spec.energy, spec.n_uses
    if spec.variable == SweepVariable.ENERGY:
        energy = value
    elif spec.variable == SweepVariable.N_USES:
        n_uses = int(value)
    else:
        params = params.with_value(spec.variable.value, value)
    return params, energy, n_uses


def _profile_rows(spec: SweepSpec, value: float, params: ChannelParams,
                  energy: float, n_uses: Optional[int]) -> List[Row]:
    name = spec.variable.value
    quantity = spec.quantities[0]
    zs = np.linspace(0.0, TWO_PI, spec.z_steps)

    if quantity == SweepQuantity.SPECTRUM:
        if spec.variable == SweepVariable.N_USES:
            eigenvalues = finite_spectrum(params, n_uses).eigenvalues
            return [{name: value, "j": j, "eta": float(eta)}
                    for j, eta in enumerate(eigenvalues, start=1)]
        etas = eta_of_z(params, zs)
        return [{name: value, "z": float(z), "eta": float(eta)} for z, eta in zip(zs, etas)]

    distribution = optimal_distribution(params, energy)
    return [{name: value, "z": float(z), "n_of_z": mode_photons(distribution, float(z))} for z in zs]


def evaluate_point(spec: SweepSpec, value: float) -> List[Row]:
    """All requested quantities at one grid point, as output rows"""
    params, energy, n_uses = _point(spec, value)
    if spec.quantities[0].is_profile:
        return _profile_rows(spec, value, params, energy, n_uses)

    row: Row = {spec.variable.value: value}
    distribution = None
    for quantity in spec.quantities:
        if quantity == SweepQuantity.CAPACITY:
            if spec.variable == SweepVariable.N_USES:
                result = finite_capacity(params, energy, n_uses)
            else:
                result = asymptotic_capacity(params, energy)
                distribution = distribution or result.distribution
            row["capacity_nats"] = result.nats_per_use
        elif quantity == SweepQuantity.Z0_FRACTION:
            if distribution is None:
                distribution = optimal_distribution(params, energy)
            row["z0_fraction"] = distribution.z0_fraction
        elif quantity == SweepQuantity.E_CRIT:
            row["e_crit"] = critical_energy(params)
        elif quantity == SweepQuantity.N_CRIT:
            row["n_crit"] = critical_temperature(params.kappa, params.mu, energy)
    return [row]


def columns_for(spec: SweepSpec) -> List[str]:
    name = spec.variable.value
    quantity = spec.quantities[0]
    if quantity == SweepQuantity.SPECTRUM:
        return [name, "j", "eta"] if spec.variable == SweepVariable.N_USES else [name, "z", "eta"]
    if quantity == SweepQuantity.N_OF_Z:
        return [name, "z", "n_of_z"]
    names = {
        SweepQuantity.CAPACITY: "capacity_nats",
        SweepQuantity.Z0_FRACTION: "z0_fraction",
        SweepQuantity.E_CRIT: "e_crit",
        SweepQuantity.N_CRIT: "n_crit",
    }
    return [name] + [names[q] for q in spec.quantities]


def _configure_worker(quad_tol: float) -> None:
    settings.quad_tol = quad_tol


def sweep(options: RunOptions) -> Table:
    spec = build_spec(options)
    values = spec.values()
    workers = options.workers or settings.workers
    evaluate = partial(evaluate_point, spec)

    if workers > 1:
        logger.info(f"Sweeping {len(values)} points of {spec.variable.value} on {workers} workers")
        with ProcessPoolExecutor(max_workers=workers, initializer=_configure_worker,
                                 initargs=(settings.quad_tol,)) as pool:
            results = list(pool.map(evaluate, values))
    else:
        results = [evaluate(value) for value in values]

    table = Table(columns=columns_for(spec))
    for rows in results:
        table.rows.extend(rows)
    return table
