import os
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra='ignore')

    # Base settings
    PROJECT_NAME: str = "crpd"
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "WARNING")

    # Parallel sections (0 = one worker per CPU)
    CRPD_WORKERS: int = int(os.getenv("CRPD_WORKERS", "0"))

    # Numerical thresholds
    BRANCH_EPS: float = 1e-8
    KAPPA_POS: float = 1e-8

    # Inference
    CI_LEVEL: float = 0.95

    # Output documents
    SCHEMA_VERSION: str = "1.0"

    # Cross-validation grids above this size need an explicit opt-in
    MAX_CV_GRID: int = 1001

    def resolve_workers(self) -> int:
        """Number of worker processes to use for parallel sections"""
        if self.CRPD_WORKERS > 0:
            return self.CRPD_WORKERS
        return os.cpu_count() or 1


settings = Settings()
