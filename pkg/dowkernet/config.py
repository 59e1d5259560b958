"""
Configuration module for Dowkernet.
Loads analysis defaults from environment variables (prefix DOWKER_) with sensible defaults.
"""
import math
from typing import Optional

import psutil
from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Analysis settings loaded from environment variables."""

    # Effective distance
    epsilon: float = 1e-10
    normalization: str = "out"  # "out" (source out-weight) or "in" (printed formula)

    # Filtration / homology
    max_dim: int = 2
    homology_dims: int = 1  # highest homology dimension reported

    # Classical centralities
    katz_alpha: float = 0.1
    katz_beta: float = 1.0
    pagerank_alpha: float = 0.85
    tolerance: float = 1e-12
    max_iterations: int = 10_000

    # Workers (0 = all available cores)
    threads: int = 0

    # Logging
    log_level: str = "INFO"
    log_dir: str = "logs"
    stats_enabled: bool = True

    class Config:
        env_prefix = "DOWKER_"
        env_file = ".env"
        case_sensitive = False

    @field_validator("epsilon")
    @classmethod
    def _epsilon_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        return v

    @field_validator("normalization")
    @classmethod
    def _known_normalization(cls, v: str) -> str:
        if v not in ("out", "in"):
            raise ValueError("normalization must be 'out' or 'in'")
        return v

    @property
    def sentinel(self) -> float:
        """Distance imputed for absent edges at the configured epsilon."""
        return 1.0 - math.log(self.epsilon)


# Global settings instance
settings = Settings()


def resolve_threads(requested: Optional[int] = None) -> int:
    """Return a positive worker count.

    Priority:
      1. explicit ``requested`` (e.g. the --threads flag) when > 0
      2. DOWKER_THREADS via settings when > 0
      3. available cores
    """
    for candidate in (requested, settings.threads):
        if candidate is not None and candidate > 0:
            return int(candidate)
    return psutil.cpu_count(logical=True) or 1
