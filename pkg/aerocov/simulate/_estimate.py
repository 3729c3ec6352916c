from __future__ import annotations

import logging
import math
from functools import partial
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

from ..analytic import tier_thresholds
from ..core import horizontal_exclusion
from ..models import LinkClass, Scenario, SimConfig
from ..util import iter_chunks, parallel_map, trial_rng
from ._deploy import classify_links, deploy, resolve_sim_radius, sample_users
from ._snapshot import associate, fading_gains, link_budget, realize_sinr

logger = logging.getLogger(__name__)

_Z95 = 1.96


class McEstimate(BaseModel):
    """Monte-Carlo mean with a normal-approximation 95% half-width."""

    model_config = ConfigDict(frozen=True)

    mean: float
    half_width_95: float = Field(..., ge=0)
    trials: int = Field(..., ge=1)
    seed: int

    @classmethod
    def from_bernoulli(cls, successes: int, trials: int, seed: int) -> McEstimate:
        p = successes / trials
        half = _Z95 * math.sqrt(p * (1 - p) / trials)
        return cls(mean=p, half_width_95=half, trials=trials, seed=seed)

    @classmethod
    def from_samples(cls, values: ArrayLike, seed: int) -> McEstimate:
        x = np.asarray(values, dtype=float)
        std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
        half = _Z95 * std / math.sqrt(x.size)
        return cls(mean=float(x.mean()), half_width_95=half, trials=x.size, seed=seed)

    @property
    def interval(self) -> Tuple[float, float]:
        return self.mean - self.half_width_95, self.mean + self.half_width_95


def _chunk(window: Tuple[int, int], kernel: Callable[[int], object]) -> np.ndarray:
    start, stop = window
    return np.array([kernel(t) for t in range(start, stop)], dtype=float)


def run_trials(
    kernel: Callable[[int], object],
    sim: SimConfig,
    threads: Optional[int] = None,
    desc: Optional[str] = None,
) -> np.ndarray:
    """Evaluate ``kernel(trial)`` for every trial, stacked along axis 0.

    Trials are split into ``sim.chunk_size`` windows that run as separate
    tasks; each trial seeds its own generator, so the result does not depend
    on chunking or worker count.
    """
    windows = list(iter_chunks(sim.trials, sim.chunk_size))
    parts = parallel_map(partial(_chunk, kernel=kernel), windows, threads, desc=desc)
    return np.concatenate(parts)


def _snapshot(trial, scenario, sim, radius, z_u):
    rng = trial_rng(sim.seed, trial)
    deployment = deploy(scenario, sim, rng, radius)
    return classify_links(deployment, z_u, scenario.channel, rng), rng


def _covered(deployment, z_u, scenario, gammas, rng) -> float:
    channel = scenario.channel
    assoc = associate(deployment, z_u, channel)
    if assoc is None:
        return 0.0
    sinr = realize_sinr(deployment, assoc, z_u, channel, rng)
    return float(sinr > gammas[assoc.tier])


def _local_trial(trial, scenario, sim, radius, z_u, gammas) -> float:
    deployment, rng = _snapshot(trial, scenario, sim, radius, z_u)
    return _covered(deployment, z_u, scenario, gammas, rng)


def _overall_trial(trial, scenario, sim, radius, gammas, local) -> float:
    rng = trial_rng(sim.seed, trial)
    z_u = float(sample_users(scenario.users, 1, rng, scenario.region_radius_m)[0])
    if local is not None:
        return local(z_u)
    deployment = classify_links(
        deploy(scenario, sim, rng, radius), z_u, scenario.channel, rng
    )
    return _covered(deployment, z_u, scenario, gammas, rng)


def estimate_local_coverage(
    scenario: Scenario,
    sim: SimConfig,
    z_u: float,
    gamma,
    *,
    threads: Optional[int] = None,
) -> McEstimate:
    """Fraction of snapshots in which the user at ``z_u`` has SINR above ``gamma``.

    ``gamma`` may be one threshold per tier, applied to the serving tier.
    """
    if z_u < 0:
        raise ValueError(f"user offset must be nonnegative, got {z_u}")
    gammas = tier_thresholds(gamma, scenario.n_tiers)
    radius = resolve_sim_radius(scenario, sim)
    kernel = partial(
        _local_trial, scenario=scenario, sim=sim, radius=radius, z_u=z_u, gammas=gammas
    )
    hits = run_trials(kernel, sim, threads, desc="local coverage")
    logger.debug("MC local coverage at z_u=%g: %d/%d", z_u, hits.sum(), hits.size)
    return McEstimate.from_bernoulli(int(hits.sum()), hits.size, sim.seed)


def estimate_overall_coverage(
    scenario: Scenario,
    sim: SimConfig,
    gamma,
    *,
    local: Optional[Callable[[float], float]] = None,
    threads: Optional[int] = None,
) -> McEstimate:
    """Coverage averaged over users drawn with density proportional to ``Λ_u(z)·z``.

    Every trial draws a user and a fresh deployment. ``local`` replaces the
    snapshot by a known local-coverage function of the user offset; it must be
    picklable when ``threads > 1``.
    """
    gammas = tier_thresholds(gamma, scenario.n_tiers)
    radius = None if local is not None else resolve_sim_radius(scenario, sim)
    kernel = partial(
        _overall_trial,
        scenario=scenario,
        sim=sim,
        radius=radius,
        gammas=gammas,
        local=local,
    )
    values = run_trials(kernel, sim, threads, desc="overall coverage")
    if local is not None:
        return McEstimate.from_samples(values, sim.seed)
    return McEstimate.from_bernoulli(int(values.sum()), values.size, sim.seed)


def _tagged_trial(trial, scenario, sim, radius, k, link, z_u) -> float:
    deployment, _ = _snapshot(trial, scenario, sim, radius, z_u)
    dist, _ = link_budget(deployment, z_u, scenario.channel)
    is_los = link is LinkClass.LOS
    mask = (deployment.tier == k) & (deployment.los == is_los)
    return float(dist[mask].min()) if mask.any() else math.inf


def empirical_tagged_distance(
    scenario: Scenario,
    sim: SimConfig,
    k: int,
    link: LinkClass,
    z_u: float = 0.0,
    *,
    threads: Optional[int] = None,
) -> np.ndarray:
    """Distance to the nearest class-``link`` tier-k UAV per trial, ``inf`` if none."""
    radius = resolve_sim_radius(scenario, sim)
    kernel = partial(
        _tagged_trial,
        scenario=scenario,
        sim=sim,
        radius=radius,
        k=k,
        link=link,
        z_u=z_u,
    )
    return run_trials(kernel, sim, threads, desc="tagged distance")


def empirical_cdf(samples: ArrayLike, r: ArrayLike):
    """Share of ``samples`` at or below ``r``; infinite samples count as mass."""
    x = np.sort(np.asarray(samples, dtype=float))
    if not x.size:
        raise ValueError("empirical CDF needs at least one sample")
    out = np.searchsorted(x, np.asarray(r, dtype=float), side="right") / x.size
    return float(out) if np.ndim(out) == 0 else out


def _association_trial(trial, scenario, sim, radius, z_u) -> float:
    deployment, _ = _snapshot(trial, scenario, sim, radius, z_u)
    assoc = associate(deployment, z_u, scenario.channel)
    if assoc is None:
        return -1.0
    return 2 * assoc.tier + (0 if assoc.link is LinkClass.LOS else 1)


def association_frequencies(
    scenario: Scenario,
    sim: SimConfig,
    z_u: float = 0.0,
    *,
    threads: Optional[int] = None,
) -> Dict[Tuple[int, LinkClass], McEstimate]:
    """Frequency with which each (tier, class) serves the user at ``z_u``."""
    radius = resolve_sim_radius(scenario, sim)
    kernel = partial(
        _association_trial, scenario=scenario, sim=sim, radius=radius, z_u=z_u
    )
    codes = run_trials(kernel, sim, threads, desc="association")
    out = {}
    for k in range(scenario.n_tiers):
        for i, link in enumerate(LinkClass):
            hits = int(np.count_nonzero(codes == 2 * k + i))
            out[(k, link)] = McEstimate.from_bernoulli(hits, codes.size, sim.seed)
    return out


def _interference_trial(trial, scenario, sim, radius, j, link, r, z_u, s):
    deployment, rng = _snapshot(trial, scenario, sim, radius, z_u)
    channel = scenario.channel
    horiz = np.hypot(
        deployment.l * np.cos(deployment.theta) - z_u,
        deployment.l * np.sin(deployment.theta),
    )
    keep = np.ones(deployment.size, dtype=bool)
    tier_j = scenario.tiers[j]
    for k, tier_k in enumerate(scenario.tiers):
        for other in LinkClass:
            rho = horizontal_exclusion(channel, link, other, tier_j, tier_k, r)
            mask = (deployment.tier == k) & (deployment.los == (other is LinkClass.LOS))
            keep &= ~(mask & (horiz < rho))
    _, mean_power = link_budget(deployment, z_u, channel)
    gains = fading_gains(deployment, channel, rng)
    interference = float(np.sum(gains[keep] * mean_power[keep]))
    return np.exp(-np.asarray(s) * interference)


def empirical_interference_laplace(
    scenario: Scenario,
    sim: SimConfig,
    j: int,
    link: LinkClass,
    r: float,
    z_u: float,
    s: Sequence[float],
    *,
    threads: Optional[int] = None,
):
    """Sample mean of ``exp(-s·I)`` given association with a tier-j UAV at ``r``.

    The conditioning keeps only UAVs outside every exclusion disc; the serving
    UAV itself is not part of the deployment.
    """
    if r < scenario.tiers[j].altitude_m:
        raise ValueError(f"r={r} is below the tier altitude")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    radius = resolve_sim_radius(scenario, sim)
    kernel = partial(
        _interference_trial,
        scenario=scenario,
        sim=sim,
        radius=radius,
        j=j,
        link=link,
        r=r,
        z_u=z_u,
        s=s,
    )
    values = run_trials(kernel, sim, threads, desc="interference")
    return [McEstimate.from_samples(values[:, i], sim.seed) for i in range(s.size)]
