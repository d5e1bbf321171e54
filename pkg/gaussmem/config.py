from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    max_n: int = 4096
    quad_tol: float = 1e-10
    quad_limit: int = 200
    root_tol: float = 1e-12
    cutoff_tol: float = 1e-10
    critical_tol: float = 1e-3
    bracket_steps: int = 200
    exp_overflow: float = 700.0
    max_nbar: float = 1e6
    significant_digits: int = 12
    workers: int = 1
    log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_prefix="GAUSSMEM_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    @property
    def float_format(self) -> str:
        return f"{{:.{self.significant_digits}g}}"


settings = Settings()
