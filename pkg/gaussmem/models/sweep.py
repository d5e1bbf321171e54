from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gaussmem.models.channel import ChannelParams


class SweepVariable(str, Enum):
    NBAR = "nbar"
    KAPPA = "kappa"
    MU = "mu"
    ENERGY = "energy"
    N_USES = "n_uses"


class SweepQuantity(str, Enum):
    CAPACITY = "capacity"
    Z0_FRACTION = "z0_fraction"
    N_OF_Z = "n_of_z"
    SPECTRUM = "spectrum"
    E_CRIT = "e_crit"
    N_CRIT = "n_crit"

    @property
    def is_profile(self) -> bool:
        """Quantities that emit one row per z or eigenvalue rather than one per grid point"""
        return self in (SweepQuantity.N_OF_Z, SweepQuantity.SPECTRUM)


class SweepSpec(BaseModel):
    """One-dimensional parameter sweep over a fixed channel"""
    variable: SweepVariable
    start: float
    stop: float
    steps: int = Field(..., ge=2)
    params: ChannelParams
    energy: float = Field(..., ge=0)
    n_uses: Optional[int] = Field(None, ge=1)
    quantities: List[SweepQuantity] = Field(..., min_length=1)
    z_steps: int = Field(101, ge=2)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_grid(self):
        if not self.start < self.stop:
            raise ValueError(f"Sweep needs start < stop, got {self.start} >= {self.stop}")
        profiles = [q for q in self.quantities if q.is_profile]
        if profiles and len(self.quantities) > 1:
            raise ValueError(f"{profiles[0].value} must be the only requested quantity")
        if self.variable == SweepVariable.N_USES:
            if self.start < 1:
                raise ValueError("n_uses sweeps start at 1 or above")
            allowed = {SweepQuantity.CAPACITY, SweepQuantity.SPECTRUM}
            if any(q not in allowed for q in self.quantities):
                raise ValueError("n_uses sweeps support only capacity and spectrum")
        elif SweepQuantity.SPECTRUM in self.quantities and self.variable == SweepVariable.ENERGY:
            raise ValueError("The spectrum does not depend on the energy")
        return self

    def values(self) -> List[float]:
        """Grid points in sweep order; n_uses grids are rounded to distinct integers"""
        grid = np.linspace(self.start, self.stop, self.steps)
        if self.variable == SweepVariable.N_USES:
            return [int(n) for n in dict.fromkeys(np.rint(grid).astype(int))]
        return [float(v) for v in grid]
