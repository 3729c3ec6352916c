from typing import Optional

from pydantic import BaseModel, ConfigDict, Field
from typing_extensions import Literal


class SimConfig(BaseModel):
    """Monte-Carlo run settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(0, ge=0, lt=2**64, description="root seed of every trial stream")
    trials: int = Field(20_000, ge=1, description="number of independent snapshots")
    sim_radius_m: Optional[float] = Field(
        None,
        gt=0,
        description="deployment disc radius; None derives it from tail_mass_tol",
    )
    tail_mass_tol: float = Field(
        1e-4, gt=0, lt=1, description="intensity mass allowed outside the disc"
    )
    sampler: Literal["inverse_cdf", "thinning"] = "inverse_cdf"
    chunk_size: int = Field(2000, ge=1, description="trials per worker task")
