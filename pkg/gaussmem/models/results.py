import math
from enum import Enum
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from gaussmem.models.channel import ChannelKind, ChannelParams, Regime

TWO_PI = 2.0 * math.pi


class QuadratureResult(BaseModel):
    """Integral value with its absolute error estimate"""
    value: float
    error_estimate: float = Field(..., ge=0)
    evaluations: int = Field(..., ge=1)


class Bracket(BaseModel):
    """Search interval for bisection"""
    lo: float
    hi: float

    @model_validator(mode="after")
    def check_order(self):
        if not self.lo < self.hi:
            raise ValueError(f"Bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        return self


class ModeTransform(BaseModel):
    """
    Output-mode coefficients of n channel uses.

    a_matrix[j, h] multiplies input mode h in output j; e_matrix[j, h] multiplies
    environment mode h (h = 0 is the initial memory). Attenuators couple the
    environment annihilation operators, amplifiers the creation operators.
    """
    a_matrix: np.ndarray
    e_matrix: np.ndarray
    regime: Regime

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def n_uses(self) -> int:
        return self.a_matrix.shape[0]

    @property
    def is_amplifier(self) -> bool:
        return self.regime.kind == ChannelKind.AMPLIFIER

    def gram(self) -> np.ndarray:
        """A A^T, the matrix whose eigenvalues are the normal-mode gains"""
        return self.a_matrix @ self.a_matrix.T

    def noise_gram(self) -> np.ndarray:
        return self.e_matrix @ self.e_matrix.T

    def bogoliubov_residual(self) -> float:
        """
        Max entrywise violation of A A^T +/- E E^T = 1, relative to the size
        of the terms being combined.
        """
        sign = -1.0 if self.is_amplifier else 1.0
        combined = self.gram() + sign * self.noise_gram()
        abs_a, abs_e = np.abs(self.a_matrix), np.abs(self.e_matrix)
        scale = np.maximum(1.0, abs_a @ abs_a.T + abs_e @ abs_e.T)
        return float(np.max(np.abs(combined - np.eye(self.n_uses)) / scale))

    def closed_form_residual(self, m: np.ndarray) -> float:
        """Max entrywise |A A^T - m|, relative to max(1, |A||A|^T)"""
        abs_a = np.abs(self.a_matrix)
        scale = np.maximum(1.0, abs_a @ abs_a.T)
        return float(np.max(np.abs(self.gram() - m) / scale))


class DivergentEigenvalue(BaseModel):
    """The single eigenvalue of M^(n) that diverges above threshold"""
    value: float
    log_value: float
    index: int = Field(..., ge=0)


class FiniteSpectrum(BaseModel):
    """Ascending eigenvalues of M^(n), with the divergent one flagged"""
    eigenvalues: np.ndarray
    regime: Regime
    divergent: Optional[DivergentEigenvalue] = None

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @property
    def n_uses(self) -> int:
        return len(self.eigenvalues)

    @property
    def bulk(self) -> np.ndarray:
        """Eigenvalues with the divergent one removed"""
        if self.divergent is None:
            return self.eigenvalues
        return np.delete(self.eigenvalues, self.divergent.index)


class SzegoReport(BaseModel):
    """Discrete eigenvalue mean against the asymptotic integral"""
    discrete_mean: float
    integral: float
    gap: float = Field(..., ge=0)
    n_uses: int
    excluded_divergent: bool = False


class AsymptoticSpectrum(BaseModel):
    """The spectral symbol eta(z) of a channel on z in [0, 2pi]"""
    params: ChannelParams
    monotone_direction: Literal["increasing", "decreasing", "flat"]

    model_config = ConfigDict(frozen=True)


class EnergyDistribution(BaseModel):
    """Optimal photon number per normal mode, N(z) = max(N~(z, lambda), 0)"""
    params: ChannelParams
    lam: float = Field(..., gt=0, serialization_alias="lambda")
    z0: float = Field(..., ge=0, le=TWO_PI)
    energy: float = Field(..., gt=0)
    achieved_energy: float

    model_config = ConfigDict(frozen=True)

    @property
    def z0_fraction(self) -> float:
        """Fraction of normal modes left empty"""
        return self.z0 / TWO_PI


class CapacityMethod(str, Enum):
    INTEGRAL = "integral"
    SPECIAL_CASE = "special_case"
    ADDITIVE_LIMIT = "additive_limit"
    FINITE_SPECTRUM = "finite_spectrum"


class CapacityResult(BaseModel):
    """Capacity in nats per channel use"""
    nats_per_use: float = Field(..., ge=0)
    quadrature_error: float = Field(0.0, ge=0)
    method: CapacityMethod
    distribution: Optional[EnergyDistribution] = None


class BoundsPair(BaseModel):
    """Finite-P lower and upper capacity bounds"""
    lower: float
    upper: float
    p_modes: int = Field(..., ge=1)
    ell_list: List[int]
    lower_etas: List[float] = []
    upper_etas: List[float] = []

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @model_validator(mode="after")
    def check_order(self):
        if self.lower > self.upper + 1e-9:
            raise ValueError(f"Lower bound {self.lower} exceeds upper bound {self.upper}")
        return self


class DiscreteDistribution(BaseModel):
    """Water-filled photon numbers over a finite list of mode gains"""
    etas: List[float]
    photons: List[float]
    lam: float = Field(..., gt=0, serialization_alias="lambda")
    nbar: float
    energy: float


class AdditiveDistribution(BaseModel):
    """Water level and cutoff for the additive-noise limit"""
    mu: float
    n_c: float
    energy: float
    level: float
    z0: float = Field(..., ge=0, le=TWO_PI)
