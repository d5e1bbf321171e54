from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from gaussmem.errors import DomainError, UsageError
from gaussmem.models.channel import ChannelParams


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class CheckKind(str, Enum):
    CLOSED_FORM = "closed-form"
    BOGOLIUBOV = "bogoliubov"
    ADDITIVE = "additive"


class RunOptions(BaseModel):
    """
    Merged command options: built-in defaults, then the --config file, then flags.

    Config-file values arrive as strings and are coerced here.
    """
    command: str
    kappa: Optional[float] = None
    mu: Optional[float] = None
    nbar: float = 0.0
    energy: Optional[float] = None
    n: Optional[int] = None
    nc: Optional[float] = None
    format: OutputFormat = OutputFormat.CSV
    out: Optional[str] = None
    tol: Optional[float] = Field(None, gt=0)
    workers: Optional[int] = Field(None, ge=1)
    verbose: bool = False

    var: Optional[str] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    steps: Optional[int] = None
    quantity: List[str] = []
    z_steps: int = Field(101, ge=2)

    check: List[CheckKind] = []
    p: Optional[int] = None
    ell: List[int] = []
    clipped: bool = False
    no_special: bool = False

    model_config = ConfigDict(extra="forbid")

    @field_validator("quantity", "check", "ell", mode="before")
    @classmethod
    def split_list(cls, value):
        if isinstance(value, str):
            return [item for item in value.replace(",", " ").split() if item]
        return value

    def require(self, *names: str) -> None:
        missing = [f"--{name}" for name in names if getattr(self, name) is None]
        if missing:
            raise UsageError(f"{self.command} requires {', '.join(missing)}")

    def channel(self) -> ChannelParams:
        """Channel parameters from --kappa, --mu and --nbar"""
        self.require("kappa", "mu")
        try:
            return ChannelParams(kappa=self.kappa, mu=self.mu, nbar=self.nbar)
        except ValidationError as e:
            raise DomainError(f"Invalid channel parameters: {e.errors()[0]['msg']}")
