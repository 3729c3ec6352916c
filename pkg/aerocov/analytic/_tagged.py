from __future__ import annotations

import math
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..core import half_angle, horizontal_distance, link_probability, uav_density
from ..models import LinkClass, QuadSpec, Scenario
from ..quad import integrate_1d, integrate_2d_nested

# user offsets this small relative to the disc radius count as on-axis
_ON_AXIS = 1e-9
# residual tagged mass allowed beyond the truncation radius
HORIZON_TOL = 1e-5


def _extent(scenario: Scenario) -> float:
    r = scenario.region_radius_m
    return math.inf if r is None else r


def _check_offsets(r: float, z_u: float) -> None:
    if r < 0 or z_u < 0:
        raise ValueError(f"distances must be nonnegative (r={r}, z_u={z_u})")


def link_intensity(
    scenario: Scenario, k: int, link: LinkClass, z_u: float
) -> Callable[[float, np.ndarray], np.ndarray]:
    """Centre-polar intensity ``l·Λ_k(l)·P_k^Q(d)`` of class-``link`` tier-k UAVs.

    ``d`` is the horizontal distance from the UAV to the user at ``(z_u, 0)``.
    """
    tier = scenario.tiers[k]
    channel = scenario.channel

    def v(l: float, theta: np.ndarray) -> np.ndarray:
        d = horizontal_distance(z_u, l, theta)
        p = link_probability(channel, link, tier.altitude_m, d)
        return l * uav_density(tier, l) * p

    return v


def disc_mass(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    rho: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """Expected number of class-``link`` tier-k UAVs within ``rho`` of the user.

    ``rho`` is a horizontal radius; ``inf`` gives the mass over the whole
    plane (or deployment region).
    """
    tier = scenario.tiers[k]
    if rho <= 0 or tier.lam == 0:
        return 0.0
    lo = max(0.0, z_u - rho)
    hi = min(z_u + rho, _extent(scenario))
    if math.isinf(hi):
        scenario.support_radius(tier)  # raises for homogeneous tiers
    if hi <= lo:
        return 0.0
    result = integrate_2d_nested(
        link_intensity(scenario, k, link, z_u),
        (lo, hi),
        lambda l: (0.0, float(half_angle(z_u, l, rho))),
        spec,
        points=[rho - z_u, z_u],
        decay=tier.beta or None,
    )
    return 2 * result.value


def plane_mass(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    return disc_mass(scenario, k, link, math.inf, z_u, spec)


def tagged_cdf(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    r: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """Probability that the nearest class-``link`` tier-k UAV is within ``r``.

    The distribution is defective: its limit is ``1 - exp(-plane_mass)``.
    """
    _check_offsets(r, z_u)
    h = scenario.tiers[k].altitude_m
    if r <= h:
        return 0.0
    rho = math.sqrt(r * r - h * h)
    return float(-np.expm1(-disc_mass(scenario, k, link, rho, z_u, spec)))


def _root_ratio(l: float, a: float) -> float:
    # l / sqrt(l + a), finite at l = a = 0
    return math.sqrt(l) if a == 0 else l / math.sqrt(l + a)


def mass_rate(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    r: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """Derivative in ``r`` of the tagged mass within ``sqrt(r² - h²)``.

    Differentiating the centre-polar mass under the integral sign leaves a
    single l-integral with weight ``1/sqrt(D)`` that is singular at both ends
    of ``[|z_u - ρ|, z_u + ρ]``; it is integrated with the algebraic-weight
    rule. On the axis (``z_u = 0``) the arc is a full circle entering at
    ``l = ρ`` and only the boundary term ``2π r Λ(ρ) P(ρ)`` remains.
    """
    tier = scenario.tiers[k]
    h = tier.altitude_m
    if r <= h or tier.lam == 0:
        return 0.0
    rho = math.sqrt(r * r - h * h)
    extent = _extent(scenario)
    # every point of the circle sees the user at horizontal distance rho
    p = float(link_probability(scenario.channel, link, h, rho))
    if p == 0:
        return 0.0
    if z_u <= _ON_AXIS * max(rho, 1.0):
        if rho > extent:
            return 0.0
        return 2 * math.pi * r * float(uav_density(tier, rho)) * p

    a, b = abs(z_u - rho), z_u + rho
    if a >= extent:
        return 0.0

    def g(l: float) -> float:
        density = float(uav_density(tier, l))
        return 4 * r * p * density * _root_ratio(l, a) / math.sqrt(l + b)

    if b <= extent:
        result = integrate_1d(g, a, b, spec, endpoint_powers=(-0.5, -0.5))
    else:
        result = integrate_1d(
            lambda l: g(l) / math.sqrt(b - l),
            a,
            extent,
            spec,
            endpoint_powers=(-0.5, 0.0),
        )
    return result.value


def tagged_pdf(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    r: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """Density of the nearest class-``link`` tier-k UAV distance at ``r``."""
    _check_offsets(r, z_u)
    tier = scenario.tiers[k]
    if r <= tier.altitude_m or math.isinf(r):
        return 0.0
    rate = mass_rate(scenario, k, link, r, z_u, spec)
    if rate == 0:
        return 0.0
    h = tier.altitude_m
    mass = disc_mass(scenario, k, link, math.sqrt(r * r - h * h), z_u, spec)
    return math.exp(-mass) * rate


def tagged_horizon(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
    tol: float = HORIZON_TOL,
) -> float:
    """Distance beyond which the tagged distance keeps less than ``tol`` mass."""
    tier = scenario.tiers[k]
    h = tier.altitude_m
    void = math.exp(-plane_mass(scenario, k, link, z_u, spec))
    limit = _extent(scenario) + z_u
    rho = max(2 * z_u, 4 * h, 100.0)
    for _ in range(64):
        if rho >= limit:
            rho = limit
            break
        if math.exp(-disc_mass(scenario, k, link, rho, z_u, spec)) - void < tol:
            break
        rho *= 2
    return math.hypot(rho, h)


class TaggedDistanceDistribution(BaseModel):
    """Distance from a user at offset ``z_u`` to its nearest class-Q tier-k UAV."""

    model_config = ConfigDict(frozen=True)

    scenario: Scenario
    k: int
    link: LinkClass
    z_u: float = 0.0
    spec: Optional[QuadSpec] = None

    def cdf(self, r: float) -> float:
        return tagged_cdf(self.scenario, self.k, self.link, r, self.z_u, self.spec)

    def pdf(self, r: float) -> float:
        return tagged_pdf(self.scenario, self.k, self.link, r, self.z_u, self.spec)

    def void_probability(self) -> float:
        """Probability that no such UAV exists at all."""
        mass = plane_mass(self.scenario, self.k, self.link, self.z_u, self.spec)
        return math.exp(-mass)
