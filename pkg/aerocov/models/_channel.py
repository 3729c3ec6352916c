from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..util import db_to_linear, dbm_to_watts
from ._link import LinkClass


class ChannelParams(BaseModel):
    """Air-to-ground channel: path loss, additional gains, Nakagami fading, noise.

    Defaults are the urban parameter set (alpha 2/3, eta 0/-20 dB, m 2/1,
    -40 dBm noise, a=4.88, b=0.429). Gains may be given in dB through the
    ``eta_los_db``, ``eta_nlos_db`` and ``noise_dbm`` keys.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha_los: float = Field(2.0, gt=0, description="LoS path-loss exponent")
    alpha_nlos: float = Field(3.0, gt=0, description="NLoS path-loss exponent")
    eta_los: float = Field(1.0, gt=0, description="LoS mean additional gain (linear)")
    eta_nlos: float = Field(
        0.01, gt=0, description="NLoS mean additional gain (linear)"
    )
    m_los: int = Field(2, ge=1, description="Nakagami shape of LoS links")
    m_nlos: int = Field(1, ge=1, description="Nakagami shape of NLoS links")
    noise_w: float = Field(1e-7, ge=0, description="noise power in watts")
    env_a: float = Field(4.88, description="environment constant a of the LoS model")
    env_b: float = Field(0.429, description="environment constant b of the LoS model")
    fixed_los_probability: Optional[float] = Field(
        None,
        ge=0,
        le=1,
        description="if set, replaces the elevation-angle LoS model by a constant",
    )

    @model_validator(mode="before")
    @classmethod
    def _from_db(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        for key in ("eta_los", "eta_nlos"):
            if f"{key}_db" in data:
                if key in data:
                    raise ValueError(f"give either {key!r} or '{key}_db', not both")
                data[key] = db_to_linear(data.pop(f"{key}_db"))
        if "noise_dbm" in data:
            if "noise_w" in data:
                raise ValueError("give either 'noise_w' or 'noise_dbm', not both")
            data["noise_w"] = dbm_to_watts(data.pop("noise_dbm"))
        return data

    @model_validator(mode="after")
    def _check_ordering(self) -> ChannelParams:
        if not self.alpha_los < self.alpha_nlos:
            raise ValueError(
                f"alpha_los ({self.alpha_los}) must be smaller than "
                f"alpha_nlos ({self.alpha_nlos})"
            )
        if not self.eta_los > self.eta_nlos:
            raise ValueError(
                f"eta_los ({self.eta_los}) must be larger than "
                f"eta_nlos ({self.eta_nlos})"
            )
        return self

    def alpha(self, link: LinkClass) -> float:
        return self.alpha_los if link is LinkClass.LOS else self.alpha_nlos

    def eta(self, link: LinkClass) -> float:
        return self.eta_los if link is LinkClass.LOS else self.eta_nlos

    def m(self, link: LinkClass) -> int:
        return self.m_los if link is LinkClass.LOS else self.m_nlos
