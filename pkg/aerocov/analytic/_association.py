from __future__ import annotations

import logging
import math
from typing import Callable, Optional

from ..core import horizontal_exclusion
from ..models import LinkClass, QuadSpec, Scenario
from ..quad import integrate_1d
from ._tagged import disc_mass, plane_mass, tagged_horizon, tagged_pdf

logger = logging.getLogger(__name__)


def association_probability(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    r: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """Probability that the tagged tier-j ``link`` UAV at ``r`` is the strongest.

    Product of the void probabilities of the exclusion discs of the other
    ``2K - 1`` tagged UAVs; the tagged UAV's own class and tier is skipped.
    """
    tier_j = scenario.tiers[j]
    if r < tier_j.altitude_m:
        raise ValueError(f"r={r} is below the tier altitude {tier_j.altitude_m}")
    mass = 0.0
    for k, tier_k in enumerate(scenario.tiers):
        for other in LinkClass:
            if k == j and other is link:
                continue
            rho = float(
                horizontal_exclusion(scenario.channel, link, other, tier_j, tier_k, r)
            )
            mass += disc_mass(scenario, k, other, rho, z_u, spec)
    return math.exp(-mass)


def serving_integral(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    z_u: float = 0.0,
    conditional: Optional[Callable[[float], float]] = None,
    spec: Optional[QuadSpec] = None,
) -> float:
    """``∫ f(r)·P^A(r)·conditional(r) dr`` over the tagged tier-j ``link`` UAV.

    Without ``conditional`` this is the probability that the user is served by
    a tier-j ``link`` UAV.
    """
    tier = scenario.tiers[j]
    if tier.lam == 0 or plane_mass(scenario, j, link, z_u, spec) == 0:
        return 0.0
    h = tier.altitude_m
    r_max = tagged_horizon(scenario, j, link, z_u, spec)

    def integrand(r: float) -> float:
        density = tagged_pdf(scenario, j, link, r, z_u, spec)
        if density == 0:
            return 0.0
        value = density * association_probability(scenario, j, link, r, z_u, spec)
        if conditional is not None and value > 0:
            value *= conditional(r)
        return value

    result = integrate_1d(integrand, h, r_max, spec, points=[math.hypot(z_u, h)])
    logger.debug(
        "tier %d %s at z_u=%g: %.6g (%d evaluations)",
        j,
        link,
        z_u,
        result.value,
        result.evaluations,
    )
    return result.value


def association_frequency(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    return serving_integral(scenario, j, link, z_u, None, spec)
