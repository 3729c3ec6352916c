from __future__ import annotations

import math
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike
from scipy import special

from ..core import half_angle, horizontal_distance, horizontal_exclusion
from ..models import LinkClass, QuadSpec, Scenario
from ..quad import integrate_2d_nested
from ._tagged import link_intensity


def w_derivatives(m: int, c: np.ndarray, s: np.ndarray, order: int) -> np.ndarray:
    """``∂ⁿ/∂sⁿ [1 - (m / (m + s·c))^m]`` for ``n = 0..order``.

    ``c`` is the mean received power of an interferer (shape ``(N,)``), ``s``
    the Laplace arguments (shape ``(S,)``); the result has shape
    ``(N, S, order + 1)``.
    """
    c = np.asarray(c, dtype=float)[:, None]
    s = np.asarray(s, dtype=float)[None, :]
    log_base = np.log1p(s * c / m)
    out = np.empty(log_base.shape + (order + 1,))
    out[..., 0] = -np.expm1(-m * log_base)
    for n in range(1, order + 1):
        out[..., n] = (
            -((-1.0) ** n)
            * special.poch(m, n)
            * (c / m) ** n
            * np.exp(-(m + n) * log_base)
        )
    return out


def _outside_disc(
    scenario: Scenario,
    k: int,
    link: LinkClass,
    rho: float,
    z_u: float,
    s: np.ndarray,
    order: int,
    spec: Optional[QuadSpec],
) -> np.ndarray:
    # PGFL exponent of class-`link` tier-k interferers beyond horizontal radius rho
    tier = scenario.tiers[k]
    channel = scenario.channel
    extent = scenario.support_radius(tier)
    lo = max(0.0, rho - z_u)
    if lo >= extent:
        return np.zeros((s.size, order + 1))
    m, alpha = channel.m(link), channel.alpha(link)
    gain = channel.eta(link) * tier.power_w
    h2 = tier.altitude_m**2
    intensity = link_intensity(scenario, k, link, z_u)

    def integrand(l: float, theta: np.ndarray) -> np.ndarray:
        d = horizontal_distance(z_u, l, theta)
        mean_power = gain * (d * d + h2) ** (-alpha / 2)
        v = intensity(l, theta)
        return v[:, None, None] * w_derivatives(m, mean_power, s, order)

    result = integrate_2d_nested(
        integrand,
        (lo, extent),
        lambda l: (float(half_angle(z_u, l, rho)), math.pi),
        spec,
        points=[abs(z_u - rho), z_u + rho, z_u],
        decay=tier.beta or None,
        vector=True,
    )
    return 2 * result.value


def interference_exponents(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    r: float,
    z_u: float,
    s: ArrayLike,
    order: int = 0,
    spec: Optional[QuadSpec] = None,
) -> np.ndarray:
    """``-∂ⁿ/∂sⁿ log L_I(s)`` for ``n = 0..order`` at every ``s``.

    Interferers of each tier and class lie outside the exclusion disc implied
    by association with the tier-j ``link`` UAV at distance ``r``: a separate,
    contained or intersecting disc depending on the centre-polar radius, all
    handled through the clamped half-angle. Shape ``(len(s), order + 1)``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s < 0):
        raise ValueError("Laplace arguments must be nonnegative")
    tier_j = scenario.tiers[j]
    total = np.zeros((s.size, order + 1))
    for k, tier_k in enumerate(scenario.tiers):
        if tier_k.lam == 0:
            continue
        for other in LinkClass:
            rho = float(
                horizontal_exclusion(scenario.channel, link, other, tier_j, tier_k, r)
            )
            total += _outside_disc(scenario, k, other, rho, z_u, s, order, spec)
    return total


def interference_laplace(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    s: float,
    r: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """``E[exp(-s·I)]`` given association with the tier-j ``link`` UAV at ``r``."""
    if s < 0:
        raise ValueError(f"Laplace argument must be nonnegative, got {s}")
    if s == 0:
        return 1.0
    exponent = interference_exponents(scenario, j, link, r, z_u, [s], 0, spec)
    return math.exp(-exponent[0, 0])


def signal_laplace(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    s: float,
    r: float,
    z_u: float = 0.0,
    spec: Optional[QuadSpec] = None,
) -> float:
    """Laplace transform of interference plus noise, ``e^{-σ²s}·L_I(s)``."""
    lap = interference_laplace(scenario, j, link, s, r, z_u, spec)
    return math.exp(-scenario.channel.noise_w * s) * lap


def exp_derivatives(log_derivs: np.ndarray) -> np.ndarray:
    """Derivatives of ``exp(g)`` from the derivatives of ``g``.

    Uses ``L^{(n+1)} = Σ_i C(n, i)·g^{(i+1)}·L^{(n-i)}``.
    """
    g = np.asarray(log_derivs, dtype=float)
    out = np.empty_like(g)
    out[0] = math.exp(g[0])
    for n in range(g.size - 1):
        i = np.arange(n + 1)
        out[n + 1] = np.sum(special.comb(n, i) * g[i + 1] * out[n - i])
    return out


def laplace_derivatives(
    scenario: Scenario,
    j: int,
    link: LinkClass,
    s: float,
    r: float,
    z_u: float = 0.0,
    order: int = 0,
    spec: Optional[QuadSpec] = None,
) -> np.ndarray:
    """``∂ⁿ/∂sⁿ L_U(s)`` for ``n = 0..order``; ``L_U = e^{-σ²s}·L_I``."""
    g = -interference_exponents(scenario, j, link, r, z_u, [s], order, spec)[0]
    noise = scenario.channel.noise_w
    g[0] -= noise * s
    if order >= 1:
        g[1] -= noise
    return exp_derivatives(g)
