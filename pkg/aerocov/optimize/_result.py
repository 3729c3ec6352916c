from __future__ import annotations

from typing import List, Optional, Tuple

import pandas as pd
import xarray as xr
from pydantic import BaseModel, ConfigDict, Field

Point = Tuple[float, ...]


class InfeasibleError(RuntimeError):
    """No admissible β vector was found, or the starting point is inadmissible."""


class OptResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    best_betas: Point
    best_value: float = Field(..., description="overall coverage at best_betas")
    feasibility: Optional[xr.Dataset] = Field(
        None,
        description="objective, count and infeasibility reason over the searched "
        "grid (dims beta_1..beta_K)",
    )
    history: List[Tuple[Point, float]] = Field(
        default_factory=list, description="accepted points, objective nondecreasing"
    )
    evaluations: int = 0

    def to_frame(self) -> pd.DataFrame:
        """One row per grid point, or per accepted step without a grid."""
        if self.feasibility is not None:
            return self.feasibility.to_dataframe().reset_index()
        rows = [
            {**{f"beta_{k + 1}": b for k, b in enumerate(betas)}, "objective": value}
            for betas, value in self.history
        ]
        return pd.DataFrame(rows)
