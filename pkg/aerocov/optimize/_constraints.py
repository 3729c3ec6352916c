from __future__ import annotations

import logging
import math
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ..analytic import local_coverage_approx
from ..core import expected_uav_count, mass_radius
from ..models import QuadSpec, Scenario, TierConfig, UserDensity

logger = logging.getLogger(__name__)

LocalFn = Callable[[Scenario, float], float]


class CountCheck(NamedTuple):
    feasible: bool
    count: float


class FloorCheck(NamedTuple):
    feasible: bool
    worst_z: float
    worst_value: float


def count_constraint(
    tiers: Sequence[TierConfig], n_max: float, region_radius: Optional[float] = None
) -> CountCheck:
    """Total expected UAV count against the cap ``n_max``.

    Counts use the planar measure ``∫ λ e^{-βz} 2πz dz`` over the plane or
    the deployment region.
    """
    radius = math.inf if region_radius is None else region_radius
    count = sum(expected_uav_count(t, radius) for t in tiers)
    return CountCheck(count <= n_max, count)


def floor_constraint(
    scenario: Scenario,
    gamma2: float,
    floor: float,
    z_grid: Sequence[float],
    *,
    local: Optional[LocalFn] = None,
    spec: Optional[QuadSpec] = None,
    stop_early: bool = True,
) -> FloorCheck:
    """Check that local coverage at ``gamma2`` reaches ``floor`` on ``z_grid``.

    Far offsets are checked first since they fail first; ``stop_early``
    returns at the first violation.
    """
    if not len(z_grid):
        raise ValueError("z_grid must not be empty")
    worst_z, worst = math.nan, math.inf
    for z in sorted(z_grid, reverse=True):
        if local is None:
            value = local_coverage_approx(scenario, z, gamma2, spec=spec)
        else:
            value = local(scenario, z)
        if value < worst:
            worst_z, worst = float(z), float(value)
        if value < floor and stop_early:
            break
    return FloorCheck(worst >= floor, worst_z, worst)


def default_z_grid(
    users: UserDensity,
    points: int = 25,
    mass: float = 0.999,
    region: Optional[float] = None,
) -> Tuple[float, ...]:
    """The centre plus log-spaced offsets out to the radius holding ``mass`` users.

    Examples
    --------
    >>> grid = default_z_grid(UserDensity(beta_u=5e-3), points=5)
    >>> grid[0], len(grid)
    (0.0, 5)
    """
    if points < 2:
        raise ValueError("z grid needs the centre and at least one far point")
    if users.beta_u > 0:
        z_far = mass_radius(users.beta_u, mass)
        if region is not None:
            z_far = min(z_far, region)
    elif region is not None:
        z_far = region * math.sqrt(mass)
    else:
        raise ValueError("homogeneous users need a finite region")
    far = np.geomspace(z_far * 1e-2, z_far, points - 1)
    return (0.0,) + tuple(float(z) for z in far)


def beta_for_count(
    tier: TierConfig, count: float, region: Optional[float] = None
) -> float:
    """Decay rate at which ``tier`` holds ``count`` UAVs in expectation."""
    if count <= 0:
        raise ValueError(f"count must be positive, got {count}")
    if tier.lam == 0:
        raise ValueError("a tier with zero density holds no UAVs at any beta")
    plane = math.sqrt(2 * math.pi * tier.lam / count)
    if region is None:
        return plane
    ceiling = math.pi * region**2 * tier.lam
    if count >= ceiling:
        raise ValueError(
            f"{count:.4g} UAVs exceed the {ceiling:.4g} a homogeneous tier "
            f"places in a region of radius {region}"
        )

    def gap(beta: float) -> float:
        candidate = tier.model_copy(update={"beta": beta})
        return expected_uav_count(candidate, region) - count

    return float(optimize.brentq(gap, 1e-12, 2 * plane, xtol=1e-15, rtol=1e-12))
