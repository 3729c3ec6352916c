from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np

from ..models._link import LinkClass

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from ..models import ChannelParams, TierConfig


def los_probability(
    channel: ChannelParams, altitude: float, horiz_dist: ArrayLike
) -> Any:
    """Probability of a line-of-sight link at the given elevation geometry.

    The elevation angle is ``atan(h/z)`` in degrees, exactly 90 at ``z = 0``.
    """
    if altitude <= 0:
        raise ValueError(f"altitude must be positive, got {altitude}")
    z = np.asarray(horiz_dist, dtype=float)
    if np.any(z < 0):
        raise ValueError("horizontal distance must be nonnegative")
    if channel.fixed_los_probability is not None:
        return np.full_like(z, channel.fixed_los_probability)
    elevation = np.degrees(np.arctan2(altitude, z))
    a, b = channel.env_a, channel.env_b
    return 1 / (1 + a * np.exp(-b * (elevation - a)))


def link_probability(
    channel: ChannelParams, link: LinkClass, altitude: float, horiz_dist: ArrayLike
) -> Any:
    p_los = los_probability(channel, altitude, horiz_dist)
    return p_los if link is LinkClass.LOS else 1 - p_los


def exclusion_distance(
    channel: ChannelParams,
    assoc: LinkClass,
    interf: LinkClass,
    tier_j: TierConfig,
    tier_k: TierConfig,
    r: ArrayLike,
) -> Any:
    """Closest distance of a tier-k ``interf`` UAV given association at ``r``.

    Any tier-k UAV of class ``interf`` nearer than this would deliver a larger
    average power than the serving tier-j ``assoc`` UAV at distance ``r``.
    Fading gains have unit mean, so only mean gains and powers enter.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < tier_j.altitude_m * (1 - 1e-12)):
        raise ValueError(
            f"serving distance {r} is below the tier altitude {tier_j.altitude_m}"
        )
    alpha_1, alpha_2 = channel.alpha(assoc), channel.alpha(interf)
    ratio = (channel.eta(interf) * tier_k.power_w) / (
        channel.eta(assoc) * tier_j.power_w
    )
    balance = ratio ** (1 / alpha_2) * r ** (alpha_1 / alpha_2)
    return np.maximum(tier_k.altitude_m, balance)


def horizontal_exclusion(
    channel: ChannelParams,
    assoc: LinkClass,
    interf: LinkClass,
    tier_j: TierConfig,
    tier_k: TierConfig,
    r: ArrayLike,
) -> Any:
    d = exclusion_distance(channel, assoc, interf, tier_j, tier_k, r)
    return np.sqrt(np.maximum(d**2 - tier_k.altitude_m**2, 0.0))


def gamma_gain_laplace(m: int, t: ArrayLike) -> Any:
    """``E[exp(-tG)]`` for a unit-mean Gamma(m, 1/m) power gain."""
    if m < 1:
        raise ValueError(f"Nakagami shape must be at least 1, got {m}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("Laplace argument must be nonnegative")
    return np.exp(-m * np.log1p(t / m))
