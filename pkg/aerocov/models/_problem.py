from __future__ import annotations

from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing_extensions import Literal

from ._quad import QuadSpec
from ._scenario import Scenario


class OptProblem(BaseModel):
    """Maximize overall coverage over per-tier betas.

    Constraints: total expected UAV count at most ``n_max``, and local
    coverage at ``gamma2`` at least ``floor`` at every point of ``z_grid``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: Scenario
    gamma1: float = Field(..., gt=0, description="overall-coverage threshold (linear)")
    gamma2: float = Field(..., gt=0, description="local floor threshold (linear)")
    floor: Optional[float] = Field(
        0.95, gt=0, lt=1, description="minimum local coverage; None disables"
    )
    n_max: float = Field(..., gt=0, description="cap on the expected UAV count")
    z_grid: Optional[Tuple[float, ...]] = Field(
        None, description="user offsets where the floor is checked"
    )
    beta_grid: Optional[Tuple[Tuple[float, ...], ...]] = Field(
        None, description="per-tier candidate betas for grid search"
    )
    lambda_mode: Literal["fixed", "rescale"] = Field(
        "fixed",
        description="'rescale' adjusts each lambda to keep its tier count fixed",
    )
    method: Literal["approx", "exact"] = "approx"
    nodes: int = Field(16, ge=2, description="quadrature nodes of the user average")
    step_factor: float = Field(
        0.85, gt=0, lt=1, description="multiplicative beta step of the heuristic"
    )
    max_steps: int = Field(20, ge=1, description="steps per tier per round")
    beta_min: float = Field(1e-5, gt=0)
    beta_max: float = Field(0.1, gt=0)
    quad: QuadSpec = QuadSpec(rel_tol=1e-4)

    @model_validator(mode="after")
    def _check(self) -> OptProblem:
        if self.z_grid is not None:
            if not self.z_grid:
                raise ValueError("z_grid must not be empty")
            if min(self.z_grid) != 0:
                raise ValueError("z_grid must include the centre (z=0)")
            if len(self.z_grid) < 2:
                raise ValueError("z_grid must include a far point besides z=0")
        if self.beta_grid is not None:
            if len(self.beta_grid) != self.scenario.n_tiers:
                raise ValueError(
                    f"beta_grid has {len(self.beta_grid)} axes for "
                    f"{self.scenario.n_tiers} tiers"
                )
            if any(not axis for axis in self.beta_grid):
                raise ValueError("every beta_grid axis needs at least one value")
        if self.beta_min >= self.beta_max:
            raise ValueError("beta_min must be smaller than beta_max")
        return self
