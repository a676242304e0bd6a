"""
Application settings and configuration management.

This module uses Pydantic Settings for environment-based configuration
of the numeric tolerances, truncation budgets, calibration constants and
output conventions shared by every service.
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator
from typing import Literal
from functools import lru_cache
from pathlib import Path


class Settings(BaseSettings):
    """
    Lab settings with environment variable support.

    All settings can be overridden via environment variables or a `.env`
    file in the working directory. See .env.example for all options.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    # ==================== Application Settings ====================
    APP_NAME: str = Field(default="Quaternion Lattice Lab",
                          description="Application name")
    APP_VERSION: str = Field(
        default="0.1.0", description="Application version")
    ENVIRONMENT: Literal["development", "staging", "production"] = Field(
        default="development",
        description="Current environment"
    )
    DEBUG: bool = Field(default=False, description="Debug mode")

    # ==================== Numeric Settings ====================
    FLOAT_TOLERANCE: float = Field(
        default=1e-9, gt=0, lt=1e-3,
        description="Relative tolerance of float pre-checks before exact fallback")
    EXACT_FALLBACK: bool = Field(
        default=True,
        description="Re-test near-boundary points in exact rational arithmetic")
    ENUMERATION_BUDGET: int = Field(
        default=2_000_000, ge=1000,
        description="Maximum number of candidate vectors per enumeration")

    # ==================== Theta Settings ====================
    THETA_ACCURACY: float = Field(
        default=1e-10, gt=0, description="Default tail target of lattice sums")
    THETA_MAX_POINTS: int = Field(
        default=1_500_000, ge=1000,
        description="Truncation budget (lattice points) of one theta evaluation")
    QUADRATURE_NODES_X: int = Field(
        default=48, ge=8, description="Gauss-Legendre nodes along x")
    QUADRATURE_NODES_Y: int = Field(
        default=64, ge=8, description="Gauss-Legendre nodes along y")
    QUADRATURE_Y_MAX: float = Field(
        default=8.0, gt=1.0,
        description="Height above the arc where the cusp integral is cut")

    # ==================== Calibration Settings ====================
    CALIBRATION_CONSTANT: float = Field(
        default=64.0, gt=1.0,
        description="Allowed ratio observed/bound for constant-1 bounds")
    MINIMUM_CONSTANT: float = Field(
        default=0.25, gt=0.0, le=1.0,
        description="Allowed factor between first minimum and its lower bound")
    PAIR_COUNT_CAP: int = Field(
        default=5_000_000, ge=1,
        description="Refuse equal-determinant pair counts above this size")

    # ==================== Output Settings ====================
    OUTPUT_DIR: Path = Field(
        default=Path("results"), description="Default directory for reports")
    FLOAT_SIGNIFICANT_DIGITS: int = Field(
        default=12, ge=6, le=17, description="Significant digits of floats in reports")
    SCHEMA_VERSION: str = Field(
        default="1", description="Report schema version")
    DEFAULT_WORKERS: int = Field(
        default=1, ge=1, description="Default worker processes for grid sweeps")

    # ==================== Logging Settings ====================
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO",
        description="Logging level"
    )
    ENABLE_FILE_LOGGING: bool = Field(
        default=False, description="Enable file logging")
    LOG_DIR: Path = Field(default=Path("logs"), description="Log directory")
    LOG_FILE_MAX_SIZE: int = Field(
        default=10 * 1024 * 1024, ge=1024, description="Max log file size in bytes")
    LOG_FILE_BACKUP_COUNT: int = Field(
        default=5, ge=1, description="Number of backup log files to keep")

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept lower-case level names from the environment."""
        if isinstance(v, str):
            return v.upper()
        return v

    @property
    def is_development(self) -> bool:
        """Check if running in development environment."""
        return self.ENVIRONMENT == "development"

    def float_format(self) -> str:
        """
        Format spec used for every float written to a report.

        Returns:
            str: e.g. ".12g"
        """
        return f".{self.FLOAT_SIGNIFICANT_DIGITS}g"


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.

    Uses lru_cache to ensure settings are loaded only once.

    Returns:
        Settings: Application settings instance
    """
    return Settings()


# Create settings instance
settings = get_settings()


# Export for convenience
__all__ = ["Settings", "get_settings", "settings"]
