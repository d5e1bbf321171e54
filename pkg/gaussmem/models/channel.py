from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class ChannelKind(str, Enum):
    ATTENUATOR = "attenuator"
    AMPLIFIER = "amplifier"
    IDENTITY = "identity"


class Threshold(str, Enum):
    BELOW = "below"
    AT = "at"
    ABOVE = "above"


class ChannelParams(BaseModel):
    """Physical parameters of the memory channel (kappa, mu, nbar)"""
    kappa: float = Field(..., ge=0, description="Gain or transmissivity of the per-use channel")
    mu: float = Field(..., ge=0, le=1, description="Transmissivity of the memory beam splitter")
    nbar: float = Field(0.0, ge=0, description="Mean photon number of the thermal environment")

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    @property
    def product(self) -> float:
        """The threshold combination mu*kappa"""
        return self.mu * self.kappa

    @property
    def is_amplifier(self) -> bool:
        return self.kappa > 1

    def with_nbar(self, nbar: float) -> "ChannelParams":
        return ChannelParams(kappa=self.kappa, mu=self.mu, nbar=nbar)

    def with_value(self, name: str, value: float) -> "ChannelParams":
        data = self.model_dump()
        data[name] = value
        return ChannelParams(**data)


class Regime(BaseModel):
    """Channel kind and its position relative to the mu*kappa = 1 threshold"""
    kind: ChannelKind
    threshold: Threshold

    model_config = ConfigDict(frozen=True)
