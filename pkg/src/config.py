from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import field_validator
from typing import List, Union

VERIFY_SUITES = ["core", "krawtchouk", "lp", "noise", "transform", "distinguish", "gaussmix"]


class Settings(BaseSettings):
    """Lab settings, overridable through LAB_* environment variables or .env"""

    # Logging
    log_level: str = "INFO"

    # Numerics
    mp_dps: int = 50
    bound_slack: float = 1e-12
    phi_slack: float = 1e-10

    # Gaussian-mixture grid and optimizer
    grid_radius: float = 10.0
    grid_step: float = 1e-3
    mixture_starts: int = 64
    mixture_budget: int = 4000
    seed: int = 0

    # Exact solver
    max_pivots: int = 100000

    # Workers
    threads: int = 1

    # Verification
    verify_suites: Union[str, List[str]] = "all"

    model_config = SettingsConfigDict(
        env_prefix="LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra='ignore'
    )

    @field_validator('verify_suites', mode='before')
    @classmethod
    def parse_suites(cls, v):
        """Parse comma-separated string into list, expanding 'all'"""
        if isinstance(v, str):
            v = [x.strip() for x in v.split(',') if x.strip()]
        if not isinstance(v, list) or not v or "all" in v:
            return list(VERIFY_SUITES)
        unknown = [s for s in v if s not in VERIFY_SUITES]
        if unknown:
            raise ValueError(f"Unknown verify suites: {unknown}")
        return v

    @field_validator('threads', 'mixture_starts', 'mixture_budget', 'max_pivots', 'mp_dps')
    @classmethod
    def must_be_positive(cls, v):
        if v < 1:
            raise ValueError('Must be at least 1')
        return v

    @field_validator('grid_radius', 'grid_step')
    @classmethod
    def grid_must_be_positive(cls, v):
        if v <= 0:
            raise ValueError('Must be positive')
        return v


_settings = None


def get_settings() -> Settings:
    """Get cached settings instance"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next get_settings() re-reads the environment"""
    global _settings
    _settings = None
