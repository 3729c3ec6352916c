from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy import special

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from ..models import TierConfig, UserDensity


def _check_offset(z: ArrayLike) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise ValueError(f"horizontal distance must be nonnegative, got {z}")
    return z


def user_density(users: UserDensity, z: ArrayLike) -> Any:
    """Areal density of ground users at distance ``z`` from the centre."""
    z = _check_offset(z)
    return users.lambda_u * np.exp(-users.beta_u * z)


def uav_density(tier: TierConfig, z: ArrayLike) -> Any:
    """Areal density of tier UAVs at horizontal distance ``z`` from the centre."""
    z = _check_offset(z)
    return tier.lam * np.exp(-tier.beta * z)


def expected_uav_count(tier: TierConfig, radius: float = math.inf) -> float:
    """Expected number of tier UAVs inside a centred disc (planar measure).

    Parameters
    ----------
    tier : TierConfig
        Tier whose intensity is integrated.
    radius : float
        Disc radius in meters, ``inf`` for the whole plane.

    Returns
    -------
    float
        ``∫_0^R λ e^{-βz} 2πz dz``; ``2πλ/β²`` on the plane.

    Raises
    ------
    ValueError
        For a negative radius, or for a homogeneous tier over the plane.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if math.isinf(radius):
        if tier.beta == 0:
            raise ValueError(
                "expected UAV count diverges for a homogeneous tier on the plane"
            )
        return 2 * math.pi * tier.lam / tier.beta**2
    if tier.beta == 0:
        return math.pi * radius**2 * tier.lam
    # P(2, x) = 1 - e^{-x}(1 + x), evaluated without cancellation
    full = 2 * math.pi * tier.lam / tier.beta**2
    return full * float(special.gammainc(2, tier.beta * radius))


def mass_radius(beta: float, fraction: float) -> float:
    """Radius holding ``fraction`` of the planar mass of ``e^{-βz}``."""
    if beta <= 0:
        raise ValueError("mass radius needs a positive decay rate")
    if not 0 < fraction < 1:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    return float(special.gammaincinv(2, fraction)) / beta
