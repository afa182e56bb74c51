"""
Configuration settings for the Hasse Surface Workbench
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class SearchConfig(BaseSettings):
    """Rational point search configuration"""

    default_height: int = Field(default=50, ge=1)
    workers: int = Field(default=1, ge=1)


class LocalConfig(BaseSettings):
    """Local solvability oracle configuration"""

    default_q_max: int = Field(default=101, ge=2)
    # Exhaustive P^3(F_q) scans only run for q <= scan_cap
    scan_cap: int = Field(default=101, ge=2)
    workers: int = Field(default=1, ge=1)


class CriteriaConfig(BaseSettings):
    """Obstruction and hypothesis checks configuration"""

    trial_division_budget: int = Field(default=1_000_000, ge=2)


class ScanConfig(BaseSettings):
    """Parameter scan configuration"""

    default_range: int = Field(default=3, ge=1)
    default_limit: Optional[int] = Field(default=None, ge=1)


class Config(BaseSettings):
    """Main configuration class"""

    model_config = SettingsConfigDict(
        env_prefix="HASSE_",
        env_nested_delimiter="__",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    project_name: str = Field(default="Hasse Surface Workbench")
    version: str = Field(default="1.0.0")

    # Sub-configurations
    search: SearchConfig = Field(default_factory=SearchConfig)
    local: LocalConfig = Field(default_factory=LocalConfig)
    criteria: CriteriaConfig = Field(default_factory=CriteriaConfig)
    scan: ScanConfig = Field(default_factory=ScanConfig)

    # Logging
    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)


# Global configuration instance
config = Config()


if __name__ == "__main__":
    print(f"Configuration loaded for {config.project_name} v{config.version}")
