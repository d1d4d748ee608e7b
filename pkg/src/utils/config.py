"""
Configuration management using Pydantic Settings.

Settings are built from keyword arguments only, normally the parsed CLI
flags. Environment variables and .env files are not consulted.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any, Literal

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings, populated from CLI flags."""

    model_config = SettingsConfigDict(
        case_sensitive=False,
        extra="ignore",
        frozen=True,
    )

    # Logging
    log_level: str = Field(default="WARNING", description="Logging level")
    log_format: Literal["console", "json"] = Field(
        default="console",
        description="Log renderer: colored console output or one JSON object per line",
    )

    # Arithmetic limits
    max_weight: int = Field(
        default=2**20,
        ge=1,
        description="Largest weight accepted by chi() and the deciders",
    )
    max_grid_weight: int = Field(default=4096, ge=0, description="Largest grid --max value")

    # Decision procedures
    sweep_limit: int = Field(
        default=600,
        ge=0,
        description="Upper weight bound of the explicit/recursive equivalence sweep",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        """Keep the init-keyword source only (flags-only configuration)."""
        return (init_settings,)


_overrides: dict[str, Any] = {}


@lru_cache
def get_settings() -> Settings:
    """
    Get cached application settings.

    This function is cached to ensure we only build settings once per
    call to `configure`.
    """
    return Settings(**_overrides)


def configure(**overrides: Any) -> Settings:
    """
    Replace the active settings.

    Args:
        **overrides: Field values, typically taken from parsed CLI flags

    Returns:
        The newly active settings
    """
    _overrides.clear()
    _overrides.update({key: value for key, value in overrides.items() if value is not None})
    get_settings.cache_clear()
    return get_settings()
