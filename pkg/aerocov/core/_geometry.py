from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import ArrayLike


def horizontal_distance(z_u: ArrayLike, l: ArrayLike, theta: ArrayLike) -> Any:
    """Ground distance between a user at ``(z_u, 0)`` and a point at ``(l, θ)``."""
    l = np.asarray(l, dtype=float)
    return np.hypot(l * np.cos(theta) - z_u, l * np.sin(theta))


def user_to_uav_distance(
    z_u: ArrayLike, l: ArrayLike, theta: ArrayLike, h: ArrayLike
) -> Any:
    """3D distance from a user at ``(z_u, 0)`` to a UAV above ``(l, θ)``."""
    z_u = np.asarray(z_u, dtype=float)
    l = np.asarray(l, dtype=float)
    if np.any(z_u < 0) or np.any(l < 0):
        raise ValueError("radial coordinates must be nonnegative")
    return np.hypot(horizontal_distance(z_u, l, theta), h)


def half_angle(z_u: float, l: ArrayLike, rho: float) -> Any:
    """Half-width of the arc of radius ``l`` lying within ``rho`` of the user.

    A centre-polar point ``(l, θ)`` is within horizontal distance ``rho`` of a
    user at ``(z_u, 0)`` iff ``|θ| <= half_angle(z_u, l, rho)``.
    """
    l = np.asarray(l, dtype=float)
    if z_u == 0 or rho <= 0:
        return np.where(np.hypot(l, z_u) <= rho, np.pi, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_phi = (l**2 + z_u**2 - rho**2) / (2 * l * z_u)
    # l == 0 puts the point at distance z_u from the user
    cos_phi = np.where(l > 0, cos_phi, np.where(z_u <= rho, -1.0, 1.0))
    return np.arccos(np.clip(cos_phi, -1.0, 1.0))
