import logging

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "cusp-atlas"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "WARNING"

    @field_validator("LOG_LEVEL")
    @classmethod
    def check_log_level(cls, v: str) -> str:
        """Accept any level name the logging module knows, case-insensitively."""
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level: {v}")
        return level

    # Reproducibility (env: CUSP_ATLAS_SEED)
    SEED: int = 0x5EED

    @field_validator("SEED")
    @classmethod
    def check_seed(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"seed must be non-negative, got {v}")
        return v

    # Numerical tolerances
    TAU_MAT: float = 1e-12
    TAU_RANK: float = 1e-9
    TAU_SIGN: float = 1e-9
    CERT_TOL: float = 1e-10
    BOUNDARY_MARGIN: float = 1e-10
    WEIGHT_CLUSTER_TOL: float = 1e-3
    # invariants of triangularized inputs: weight grouping and structural ranks
    TAU_WEIGHT: float = 1e-7
    TAU_STRUCT: float = 1e-8

    @field_validator(
        "TAU_MAT",
        "TAU_RANK",
        "TAU_SIGN",
        "CERT_TOL",
        "BOUNDARY_MARGIN",
        "WEIGHT_CLUSTER_TOL",
        "TAU_WEIGHT",
        "TAU_STRUCT",
    )
    @classmethod
    def check_tolerance(cls, v: float) -> float:
        """Tolerances are strictly between 0 and 1."""
        if not 0.0 < v < 1.0:
            raise ValueError(f"tolerance must lie in (0, 1), got {v}")
        return v

    MAX_REDRAWS: int = 8

    # Orbit sampling lattice
    GRID_POINTS: int = 5
    GRID_RADIUS: float = 1.0

    @field_validator("GRID_POINTS")
    @classmethod
    def check_grid_points(cls, v: int) -> int:
        if v < 3:
            raise ValueError(f"orbit lattice needs at least 3 points per axis, got {v}")
        return v

    # Finite differences for plain callable surfaces
    FD_STEP: float = 1e-4

    # Verification harness
    VERIFY_WORKERS: int = 4
    CLASSIFIER_CONJUGATES: int = 500
    CONJUGATE_LOG_CONDITION: float = 3.0
    MIN_SUCCESS_RATE: float = 0.99

    @field_validator("MIN_SUCCESS_RATE")
    @classmethod
    def check_success_rate(cls, v: float) -> float:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"success rate must lie in [0, 1], got {v}")
        return v

    class Config:
        env_file = ".env"
        env_prefix = "CUSP_ATLAS_"
        case_sensitive = True
        extra = "ignore"


settings = Settings()
