from __future__ import annotations

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..util import dbm_to_watts


class UserDensity(BaseModel):
    """Ground users, intensity ``lambda_u * exp(-beta_u * z)`` per m²."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lambda_u: float = Field(1e-3, gt=0, description="user density scale, per m²")
    beta_u: float = Field(5e-3, ge=0, description="user homogeneity decay, per m")


class TierConfig(BaseModel):
    """One tier of UAVs sharing altitude, density law and transmit power.

    ``lambda`` is accepted as the JSON key for :attr:`lam`, and ``power_dbm``
    may replace ``power_w`` in configuration files.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    altitude_m: float = Field(..., gt=0, description="flight altitude in meters")
    lam: float = Field(..., ge=0, alias="lambda", description="density, per m²")
    beta: float = Field(0.0, ge=0, description="homogeneity decay, per m")
    power_w: float = Field(..., gt=0, description="transmit power in watts")

    @model_validator(mode="before")
    @classmethod
    def _from_dbm(cls, data: Any) -> Any:
        if isinstance(data, dict) and "power_dbm" in data:
            data = dict(data)
            if "power_w" in data:
                raise ValueError("give either 'power_w' or 'power_dbm', not both")
            data["power_w"] = dbm_to_watts(data.pop("power_dbm"))
        return data

    @property
    def homogeneous(self) -> bool:
        return self.beta == 0
