from __future__ import annotations

import warnings
from typing import Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ._channel import ChannelParams
from ._tier import TierConfig, UserDensity


class Scenario(BaseModel):
    """Complete evaluable network: users, ordered UAV tiers and channel."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    users: UserDensity = UserDensity()
    tiers: Tuple[TierConfig, ...] = Field(..., description="tiers, index 0..K-1")
    channel: ChannelParams = ChannelParams()
    region_radius_m: Optional[float] = Field(
        None,
        gt=0,
        description="radius of the deployment disc around the town centre; "
        "None means the infinite plane",
    )

    @field_validator("tiers")
    @classmethod
    def _nonempty(cls, v: Tuple[TierConfig, ...]) -> Tuple[TierConfig, ...]:
        if not v:
            raise ValueError("a scenario needs at least one tier")
        return v

    @model_validator(mode="after")
    def _flag_duplicates(self) -> Scenario:
        seen = set()
        for i, tier in enumerate(self.tiers):
            if tier in seen:
                warnings.warn(
                    f"tier {i} duplicates an earlier tier "
                    f"(altitude {tier.altitude_m} m, identical parameters)",
                    stacklevel=2,
                )
            seen.add(tier)
        return self

    @property
    def n_tiers(self) -> int:
        return len(self.tiers)

    def support_radius(self, tier: TierConfig) -> float:
        """Largest centre distance at which ``tier`` can place a UAV.

        Raises
        ------
        ValueError
            If the tier is homogeneous and no finite region is configured, since
            every plane integral over it diverges.
        """
        if self.region_radius_m is not None:
            return self.region_radius_m
        if tier.beta == 0:
            raise ValueError(
                f"tier at {tier.altitude_m} m is homogeneous (beta=0): "
                "set 'region_radius_m' to bound the deployment"
            )
        return float("inf")

    def with_tiers(self, tiers: Sequence[TierConfig]) -> Scenario:
        return self.model_copy(update={"tiers": tuple(tiers)})

    def with_betas(self, betas: Sequence[float]) -> Scenario:
        if len(betas) != self.n_tiers:
            raise ValueError(f"expected {self.n_tiers} betas, got {len(betas)}")
        return self.with_tiers(
            t.model_copy(update={"beta": float(b)}) for t, b in zip(self.tiers, betas)
        )
