from __future__ import annotations

import logging
import math
from typing import NamedTuple, Optional

import numpy as np
from scipy import special

from ..core import expected_uav_count, los_probability
from ..models import ChannelParams, LinkClass, Scenario, SimConfig, TierConfig
from ..models import UserDensity

logger = logging.getLogger(__name__)

MAX_SIM_RADIUS = 50_000.0


class Deployment(NamedTuple):
    """One snapshot of every UAV, flattened across tiers.

    Positions are centre-polar ``(l, theta)``; ``los`` is filled in by
    :func:`classify_links` for a particular user.
    """

    tier: np.ndarray
    l: np.ndarray
    theta: np.ndarray
    altitude: np.ndarray
    power: np.ndarray
    los: Optional[np.ndarray] = None

    @property
    def size(self) -> int:
        return int(self.l.size)


def _tail_fraction(tier: TierConfig, radius: float, region: Optional[float]) -> float:
    # share of the tier's intensity mass beyond `radius`
    if region is not None:
        if radius >= region:
            return 0.0
        total = expected_uav_count(tier, region)
        return 1 - expected_uav_count(tier, radius) / total if total else 0.0
    if tier.beta == 0:
        return 0.0
    return float(special.gammaincc(2, tier.beta * radius))


def resolve_sim_radius(scenario: Scenario, sim: SimConfig) -> float:
    """Radius of the disc the simulation deploys UAVs in.

    Without an explicit ``sim.sim_radius_m`` it is the smallest radius that
    keeps all but ``tail_mass_tol`` of every tier's mass (capped at 50 km),
    or the scenario's deployment region when one is set. An explicit radius
    is checked against the same tolerance.
    """
    region = scenario.region_radius_m
    tiers = [t for t in scenario.tiers if t.lam > 0]
    if sim.sim_radius_m is not None:
        radius = sim.sim_radius_m
        for tier in tiers:
            tail = _tail_fraction(tier, radius, region)
            if tail > sim.tail_mass_tol:
                raise ValueError(
                    f"sim_radius_m={radius} leaves {tail:.2e} of the mass of the tier "
                    f"at {tier.altitude_m} m outside (tolerance {sim.tail_mass_tol})"
                )
        return radius if region is None else min(radius, region)
    if region is not None:
        return region
    radius = 0.0
    for tier in tiers:
        if tier.beta == 0:
            raise ValueError(
                f"tier at {tier.altitude_m} m is homogeneous: set 'sim_radius_m' "
                "or the scenario's 'region_radius_m'"
            )
        radius = max(radius, special.gammainccinv(2, sim.tail_mass_tol) / tier.beta)
    if radius > MAX_SIM_RADIUS:
        logger.warning(
            "simulation radius %.0f m capped at %.0f m", radius, MAX_SIM_RADIUS
        )
    return float(min(max(radius, 1.0), MAX_SIM_RADIUS))


def sample_tier(
    tier: TierConfig,
    radius: float,
    rng: np.random.Generator,
    sampler: str = "inverse_cdf",
) -> np.ndarray:
    """Draw one tier's UAV positions inside a disc, shape ``(N, 2)`` of (l, θ).

    ``thinning`` draws a homogeneous PPP of intensity ``lam`` and keeps each
    point with probability ``exp(-beta·l)``; ``inverse_cdf`` draws the count
    directly and places radii by inverting the truncated radial law.
    """
    if tier.lam == 0:
        return np.empty((0, 2))
    if sampler == "thinning":
        n = rng.poisson(tier.lam * math.pi * radius**2)
        l = radius * np.sqrt(rng.random(n))
        l = l[rng.random(n) < np.exp(-tier.beta * l)]
    elif sampler == "inverse_cdf":
        n = rng.poisson(expected_uav_count(tier, radius))
        u = rng.random(n)
        if tier.beta == 0:
            l = radius * np.sqrt(u)
        else:
            top = special.gammainc(2, tier.beta * radius)
            l = special.gammaincinv(2, u * top) / tier.beta
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    theta = rng.uniform(0, 2 * math.pi, l.size)
    return np.column_stack([l, theta])


def deploy(
    scenario: Scenario,
    sim: SimConfig,
    rng: np.random.Generator,
    radius: Optional[float] = None,
) -> Deployment:
    """Sample every tier into one :class:`Deployment`."""
    if radius is None:
        radius = resolve_sim_radius(scenario, sim)
    parts = [sample_tier(t, radius, rng, sim.sampler) for t in scenario.tiers]
    counts = [len(p) for p in parts]
    points = np.concatenate(parts) if parts else np.empty((0, 2))
    tiers = scenario.tiers
    return Deployment(
        tier=np.repeat(np.arange(len(tiers)), counts),
        l=points[:, 0],
        theta=points[:, 1],
        altitude=np.repeat([t.altitude_m for t in tiers], counts),
        power=np.repeat([t.power_w for t in tiers], counts),
    )


def classify_links(
    deployment: Deployment,
    z_u: float,
    channel: ChannelParams,
    rng: np.random.Generator,
) -> Deployment:
    """Draw the LoS/NLoS state of every UAV as seen from the user at ``z_u``."""
    d = np.hypot(
        deployment.l * np.cos(deployment.theta) - z_u,
        deployment.l * np.sin(deployment.theta),
    )
    p = np.empty_like(d)
    for h in np.unique(deployment.altitude):
        mask = deployment.altitude == h
        p[mask] = los_probability(channel, float(h), d[mask])
    return deployment._replace(los=rng.random(d.size) < p)


def sample_gain(
    link: LinkClass,
    channel: ChannelParams,
    rng: np.random.Generator,
    size: Optional[int] = None,
):
    """Nakagami power gain: Gamma with shape ``m`` and unit mean."""
    m = channel.m(link)
    return rng.gamma(m, 1 / m, size)


def sample_users(
    users: UserDensity,
    n: int,
    rng: np.random.Generator,
    region: Optional[float] = None,
) -> np.ndarray:
    """Offsets of ``n`` users drawn with density proportional to ``Λ_u(z)·z``."""
    if region is None:
        if users.beta_u == 0:
            raise ValueError("homogeneous users need a finite region")
        return rng.gamma(2.0, 1 / users.beta_u, n)
    u = rng.random(n)
    if users.beta_u == 0:
        return region * np.sqrt(u)
    top = special.gammainc(2, users.beta_u * region)
    return special.gammaincinv(2, u * top) / users.beta_u
