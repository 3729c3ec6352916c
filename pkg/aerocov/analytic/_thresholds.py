"""SINR thresholds equivalent to rate and energy-efficiency targets."""
from __future__ import annotations

import math
from typing import Tuple

from ..models import Scenario


def rate_threshold(rate_bps: float, bandwidth_hz: float) -> float:
    """SINR needed for Shannon capacity ``rate_bps`` over ``bandwidth_hz``.

    Examples
    --------
    >>> round(rate_threshold(3e6, 1e6), 9)
    7.0
    """
    if rate_bps < 0:
        raise ValueError(f"rate must be nonnegative, got {rate_bps}")
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return math.expm1(rate_bps / bandwidth_hz * math.log(2))


def energy_efficiency_threshold(
    bits_per_joule: float, power_w: float, bandwidth_hz: float
) -> float:
    """SINR at which capacity per transmit watt reaches ``bits_per_joule``."""
    if power_w <= 0:
        raise ValueError(f"transmit power must be positive, got {power_w}")
    if bits_per_joule < 0:
        raise ValueError(f"efficiency must be nonnegative, got {bits_per_joule}")
    return rate_threshold(bits_per_joule * power_w, bandwidth_hz)


def energy_efficiency_thresholds(
    scenario: Scenario, bits_per_joule: float, bandwidth_hz: float
) -> Tuple[float, ...]:
    """One threshold per tier; pass the result as ``gamma`` to coverage calls."""
    return tuple(
        energy_efficiency_threshold(bits_per_joule, t.power_w, bandwidth_hz)
        for t in scenario.tiers
    )
