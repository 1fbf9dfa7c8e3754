"""Configuration management for the bellnet simulator"""

import os
from contextlib import contextmanager
from pathlib import Path


class Config:
    """Central configuration using environment variables with sensible defaults."""

    # Physicality tolerances
    HERMITIAN_TOL: float = float(os.getenv("BELLNET_HERMITIAN_TOL", "1e-10"))
    TRACE_TOL: float = float(os.getenv("BELLNET_TRACE_TOL", "1e-10"))
    PSD_TOL: float = float(os.getenv("BELLNET_PSD_TOL", "1e-9"))
    NORM_TOL: float = float(os.getenv("BELLNET_NORM_TOL", "1e-12"))
    UNITARY_TOL: float = float(os.getenv("BELLNET_UNITARY_TOL", "1e-10"))
    COMPLETENESS_TOL: float = float(os.getenv("BELLNET_COMPLETENESS_TOL", "1e-10"))
    FIDELITY_CLAMP_TOL: float = float(os.getenv("BELLNET_FIDELITY_CLAMP_TOL", "1e-9"))
    MAX_DIM: int = int(os.getenv("BELLNET_MAX_DIM", "4096"))

    # Integrator settings
    RK4_DT_NS: float = float(os.getenv("BELLNET_RK4_DT_NS", "0.05"))
    RICHARDSON_TOL: float = float(os.getenv("BELLNET_RICHARDSON_TOL", "1e-6"))
    MAX_STEP_REFINEMENTS: int = int(os.getenv("BELLNET_MAX_STEP_REFINEMENTS", "3"))
    # Step matrices are powered directly up to this superoperator size
    DENSE_POWER_MAX_DIM: int = int(os.getenv("BELLNET_DENSE_POWER_MAX_DIM", "256"))

    # Runner settings
    THREADS: int = int(os.getenv("BELLNET_THREADS", "4"))
    OUTPUT_DIR: str = os.getenv("BELLNET_OUTPUT_DIR", "runs")
    CACHE_DIR: str = os.getenv(
        "BELLNET_CACHE_DIR",
        str(Path.home() / ".cache" / "bellnet-sim"),
    )

    # General settings
    LOG_LEVEL: str = os.getenv("BELLNET_LOG_LEVEL", "INFO")
    MASK_ERROR_DETAILS: bool = os.getenv("BELLNET_MASK_ERRORS", "false").lower() == "true"

    @contextmanager
    def override(self, **values):
        """Temporarily override settings, e.g. tolerances from an experiment file."""
        unknown = [key for key in values if not hasattr(self, key)]
        if unknown:
            raise AttributeError(f"Unknown settings: {', '.join(sorted(unknown))}")
        previous = {key: getattr(self, key) for key in values}
        try:
            for key, value in values.items():
                setattr(self, key, type(previous[key])(value))
            yield self
        finally:
            for key, value in previous.items():
                setattr(self, key, value)


# Global config instance
settings = Config()
