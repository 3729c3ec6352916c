from __future__ import annotations

from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..models import ChannelParams, LinkClass
from ._deploy import Deployment


class Association(NamedTuple):
    """Serving UAV chosen for one user in one snapshot."""

    index: int
    tier: int
    link: LinkClass
    distance: float


def link_budget(
    deployment: Deployment, z_u: float, channel: ChannelParams
) -> Tuple[np.ndarray, np.ndarray]:
    """Distance and mean received power (unit fading) of every UAV."""
    if deployment.los is None:
        raise ValueError("classify_links must run before association")
    horiz = np.hypot(
        deployment.l * np.cos(deployment.theta) - z_u,
        deployment.l * np.sin(deployment.theta),
    )
    dist = np.hypot(horiz, deployment.altitude)
    los = deployment.los
    alpha = np.where(los, channel.alpha_los, channel.alpha_nlos)
    eta = np.where(los, channel.eta_los, channel.eta_nlos)
    return dist, eta * deployment.power * dist**-alpha


def associate(
    deployment: Deployment, z_u: float, channel: ChannelParams
) -> Optional[Association]:
    """Strongest-average-power association, ``None`` when no UAV exists.

    Exact ties go to LoS before NLoS, then to the lowest tier index.
    """
    if not deployment.size:
        return None
    dist, mean_power = link_budget(deployment, z_u, channel)
    # lexsort orders by the last key first
    best = int(np.lexsort((deployment.tier, ~deployment.los, -mean_power))[0])
    link = LinkClass.LOS if deployment.los[best] else LinkClass.NLOS
    return Association(best, int(deployment.tier[best]), link, float(dist[best]))


def fading_gains(
    deployment: Deployment, channel: ChannelParams, rng: np.random.Generator
) -> np.ndarray:
    m = np.where(deployment.los, channel.m_los, channel.m_nlos).astype(float)
    return rng.gamma(m, 1 / m)


def realize_sinr(
    deployment: Deployment,
    association: Optional[Association],
    z_u: float,
    channel: ChannelParams,
    rng: np.random.Generator,
    gains: Optional[np.ndarray] = None,
) -> float:
    """Instantaneous SINR of the serving link with fresh fading on every UAV.

    ``gains`` overrides the fading draw. A user without a serving UAV has
    SINR 0.
    """
    if association is None:
        return 0.0
    _, mean_power = link_budget(deployment, z_u, channel)
    if gains is None:
        gains = fading_gains(deployment, channel, rng)
    received = np.asarray(gains) * mean_power
    signal = received[association.index]
    interference = max(float(received.sum() - signal), 0.0)
    return float(signal / (interference + channel.noise_w))
