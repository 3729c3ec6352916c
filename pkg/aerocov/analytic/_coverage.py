from __future__ import annotations

import logging
import math
from functools import partial
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import special
from typing_extensions import Literal

from ..core import user_density
from ..models import ChannelParams, LinkClass, QuadSpec, Scenario, TierConfig
from ..models import UserDensity
from ..quad import (
    MAX_ORDER,
    absorb,
    call_tracked,
    integrate_1d,
    integrate_semi_infinite,
    nth_derivative,
)
from ..util import parallel_map
from ._association import serving_integral
from ._laplace import interference_exponents, laplace_derivatives, signal_laplace

logger = logging.getLogger(__name__)

Threshold = Union[float, Sequence[float]]
Method = Literal["approx", "exact"]
Derivative = Literal["analytic", "numeric"]


class CoveragePoint(BaseModel):
    """One evaluated point of a coverage curve."""

    model_config = ConfigDict(frozen=True)

    z_u: float = Field(..., ge=0, description="user offset from the centre, m")
    gamma: Union[float, Tuple[float, ...]] = Field(
        ..., description="linear SINR threshold, or one per tier"
    )
    value: float = Field(..., ge=0, le=1, description="coverage probability")
    method: Literal["exact", "approx", "monte_carlo"]
    converged: bool = True
    half_width: Optional[float] = Field(
        None, description="95% confidence half-width (Monte-Carlo only)"
    )


def tier_thresholds(gamma: Threshold, n_tiers: int) -> Tuple[float, ...]:
    """Broadcast a threshold to one value per tier."""
    if np.ndim(gamma) == 0:
        values = (float(gamma),) * n_tiers  # type: ignore[arg-type]
    else:
        values = tuple(float(g) for g in gamma)  # type: ignore[union-attr]
        if len(values) != n_tiers:
            raise ValueError(f"got {len(values)} thresholds for {n_tiers} tiers")
    if any(g < 0 or math.isnan(g) for g in values):
        raise ValueError(f"thresholds must be nonnegative, got {values}")
    return values


def mu_threshold(
    channel: ChannelParams, tier: TierConfig, link: LinkClass, r: float, gamma: float
) -> float:
    """Laplace argument ``m·γ·r^α / (η·ρ)`` of the serving link at ``r``."""
    if r <= 0:
        raise ValueError(f"distance must be positive, got {r}")
    if gamma < 0:
        raise ValueError(f"threshold must be nonnegative, got {gamma}")
    return (
        channel.m(link)
        * gamma
        * r ** channel.alpha(link)
        / (channel.eta(link) * tier.power_w)
    )


def _check_exact(channel: ChannelParams) -> None:
    worst = max(channel.m_los, channel.m_nlos)
    if worst > MAX_ORDER:
        raise ValueError(
            f"exact coverage supports Nakagami shapes up to {MAX_ORDER}, got {worst}; "
            "use method='approx'"
        )


def conditional_coverage(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    r: float,
    z_u: float,
    gamma: float,
    method: Method = "approx",
    derivative: Derivative = "analytic",
    spec: Optional[QuadSpec] = None,
) -> float:
    """``P[SINR > γ]`` given association with the tier-j ``link`` UAV at ``r``.

    ``exact`` expands the Gamma CCDF into Laplace derivatives up to order
    ``m - 1``; ``approx`` uses the bound ``(1 - e^{-ωx})^m`` on the Gamma CDF
    with ``ω = (m!)^{-1/m}``.
    """
    channel = scenario.channel
    m = channel.m(link)
    mu = mu_threshold(channel, scenario.tiers[j], link, r, gamma)
    if mu == 0:
        return 1.0
    if method == "approx":
        n = np.arange(1, m + 1)
        s = n * math.factorial(m) ** (-1 / m) * mu
        exponents = interference_exponents(scenario, j, link, r, z_u, s, 0, spec)
        laplace = np.exp(-channel.noise_w * s - exponents[:, 0])
        value = float(np.sum(special.comb(m, n) * (-1.0) ** (n + 1) * laplace))
    elif method == "exact":
        if m > MAX_ORDER:
            _check_exact(channel)
        if derivative == "analytic":
            derivs = laplace_derivatives(scenario, j, link, mu, r, z_u, m - 1, spec)
        elif derivative == "numeric":
            fn = partial(signal_laplace, scenario, j, link, r=r, z_u=z_u, spec=spec)
            derivs = np.array([nth_derivative(fn, mu, n) for n in range(m)])
        else:
            raise ValueError(f"unknown derivative engine {derivative!r}")
        n = np.arange(m)
        terms = (-mu) ** n / special.factorial(n) * derivs
        value = float(np.sum(terms))
    else:
        raise ValueError(f"unknown coverage method {method!r}")
    return min(max(value, 0.0), 1.0)


def local_coverage(
    scenario: Scenario,
    z_u: float,
    gamma: Threshold,
    method: Method = "approx",
    *,
    derivative: Derivative = "analytic",
    spec: Optional[QuadSpec] = None,
) -> float:
    """Coverage probability of a user at offset ``z_u``.

    ``gamma`` is a linear SINR threshold, or one threshold per tier (the
    energy-efficiency mode).
    """
    if z_u < 0:
        raise ValueError(f"user offset must be nonnegative, got {z_u}")
    gammas = tier_thresholds(gamma, scenario.n_tiers)
    if method == "exact":
        _check_exact(scenario.channel)
    total = 0.0
    for j, tier in enumerate(scenario.tiers):
        if tier.lam == 0:
            continue
        for link in LinkClass:
            conditional = partial(
                conditional_coverage,
                scenario,
                j,
                link,
                z_u=z_u,
                gamma=gammas[j],
                method=method,
                derivative=derivative,
                spec=spec,
            )
            total += serving_integral(scenario, j, link, z_u, conditional, spec)
    logger.debug("local %s coverage at z_u=%g: %.6f", method, z_u, total)
    return min(max(total, 0.0), 1.0)


def local_coverage_exact(
    scenario: Scenario,
    z_u: float,
    gamma: Threshold,
    *,
    derivative: Derivative = "analytic",
    spec: Optional[QuadSpec] = None,
) -> float:
    return local_coverage(
        scenario, z_u, gamma, "exact", derivative=derivative, spec=spec
    )


def local_coverage_approx(
    scenario: Scenario,
    z_u: float,
    gamma: Threshold,
    *,
    spec: Optional[QuadSpec] = None,
) -> float:
    return local_coverage(scenario, z_u, gamma, "approx", spec=spec)


def _curve_point(
    point: Tuple[float, Threshold],
    scenario: Scenario,
    method: Method,
    spec: Optional[QuadSpec],
) -> float:
    z_u, gamma = point
    return local_coverage(scenario, z_u, gamma, method, spec=spec)


def coverage_curve(
    scenario: Scenario,
    z_values: Sequence[float],
    gammas: Sequence[Threshold],
    method: Method = "approx",
    *,
    spec: Optional[QuadSpec] = None,
    threads: Optional[int] = None,
) -> List[CoveragePoint]:
    """Local coverage over the product of user offsets and thresholds.

    Each threshold is a scalar or a per-tier sequence; the points come back
    threshold-major.
    """
    if not len(z_values):
        raise ValueError("coverage curve needs at least one user offset")
    if not len(gammas):
        raise ValueError("coverage curve needs at least one threshold")
    levels = [tier_thresholds(g, scenario.n_tiers) for g in gammas]
    levels = [g if np.ndim(raw) else g[0] for g, raw in zip(levels, gammas)]
    points = [(float(z), g) for g in levels for z in z_values]
    work = partial(_curve_point, scenario=scenario, method=method, spec=spec)
    results = parallel_map(
        partial(call_tracked, work), points, threads, desc="coverage curve"
    )
    curve = []
    for (z_u, gamma), (value, log) in zip(points, results):
        absorb(log)
        curve.append(
            CoveragePoint(
                z_u=z_u,
                gamma=gamma,
                value=value,
                method=method,
                converged=log.converged,
            )
        )
    return curve


def _user_mass(users: UserDensity, radius: float) -> float:
    # ∫_0^R Λ_u(z)·z dz
    if users.beta_u == 0:
        return users.lambda_u * radius**2 / 2
    full = users.lambda_u / users.beta_u**2
    if math.isinf(radius):
        return full
    return full * float(special.gammainc(2, users.beta_u * radius))


def overall_from_local(
    local: Callable[[float], float],
    users: UserDensity,
    *,
    nodes: Optional[int] = 16,
    spec: Optional[QuadSpec] = None,
    region_radius: Optional[float] = None,
    threads: Optional[int] = None,
) -> float:
    """Average a local-coverage function over the users' polar density.

    Computes ``∫ Λ_u(z)·P(z)·z dz / ∫ Λ_u(z)·z dz`` over the plane, or over
    ``[0, region_radius]``. With ``nodes`` the integral uses a fixed
    generalized Gauss–Laguerre (plane) or Gauss–Legendre (region) rule whose
    node evaluations run in parallel; ``nodes=None`` selects adaptive
    quadrature.
    """
    if region_radius is None and users.beta_u == 0:
        raise ValueError("homogeneous users need a finite 'region_radius'")
    if nodes:
        if region_radius is None:
            x, w = special.roots_genlaguerre(nodes, 1)
            z = x / users.beta_u
        else:
            x, w = np.polynomial.legendre.leggauss(nodes)
            z = region_radius * (x + 1) / 2
            w = w * z * user_density(users, z)
        results = parallel_map(
            partial(call_tracked, local), list(z), threads, desc="user offsets"
        )
        values = []
        for value, log in results:
            absorb(log)
            values.append(value)
        return min(max(float(np.dot(w, values) / np.sum(w)), 0.0), 1.0)

    def integrand(z: float) -> float:
        return float(user_density(users, z)) * z * local(z)

    if region_radius is None:
        result = integrate_semi_infinite(integrand, 0.0, spec, decay=users.beta_u)
        total = _user_mass(users, math.inf)
    else:
        result = integrate_1d(integrand, 0.0, region_radius, spec)
        total = _user_mass(users, region_radius)
    return min(max(result.value / total, 0.0), 1.0)


def overall_coverage(
    scenario: Scenario,
    gamma: Threshold,
    method: Method = "approx",
    *,
    nodes: Optional[int] = 16,
    derivative: Derivative = "analytic",
    spec: Optional[QuadSpec] = None,
    threads: Optional[int] = None,
) -> float:
    """Coverage averaged over the user population."""
    local = partial(
        local_coverage,
        scenario,
        gamma=gamma,
        method=method,
        derivative=derivative,
        spec=spec,
    )
    return overall_from_local(
        local,
        scenario.users,
        nodes=nodes,
        spec=spec,
        region_radius=scenario.region_radius_m,
        threads=threads,
    )
