"""
Application settings and configuration
"""

import os
from typing import Optional, Tuple

from domain.models import Tolerance


def _levels_from_env(raw: str) -> Tuple[int, ...]:
    return tuple(int(part) for part in raw.split(',') if part.strip())


class Settings:
    """Application settings"""

    # Rank cutoff: explicit override, otherwise unit * max(rows, cols)
    RANK_REL_OVERRIDE: Optional[float] = (
        float(os.environ["FRAMEKIT_RANK_REL"]) if os.getenv("FRAMEKIT_RANK_REL") else None
    )
    RANK_REL_UNIT: float = float(os.getenv("FRAMEKIT_RANK_REL_UNIT", "1e-10"))
    RESIDUAL_ABS: float = float(os.getenv("FRAMEKIT_RESIDUAL_ABS", "1e-9"))

    # Jacobi SVD
    JACOBI_TOL: float = float(os.getenv("FRAMEKIT_JACOBI_TOL", "1e-13"))
    JACOBI_MAX_SWEEPS: int = int(os.getenv("FRAMEKIT_JACOBI_MAX_SWEEPS", "60"))
    SVD_METHOD: str = os.getenv("FRAMEKIT_SVD_METHOD", "jacobi")

    # Domain probes
    PROBE_LEVELS: Tuple[int, ...] = _levels_from_env(
        os.getenv("FRAMEKIT_PROBE_LEVELS", "64,256,1024,4096")
    )

    LOG_LEVEL: str = os.getenv("FRAMEKIT_LOG_LEVEL", "WARNING")

    def default_tolerance(self, rows: int, cols: int) -> Tolerance:
        """Tolerance scaled by the larger matrix dimension"""
        rank_rel = self.RANK_REL_OVERRIDE
        if rank_rel is None:
            rank_rel = self.RANK_REL_UNIT * max(rows, cols, 1)
        return Tolerance(rank_rel=rank_rel, residual_abs=self.RESIDUAL_ABS)


# Global settings instance
settings = Settings()
