"""Downlink coverage of multi-tier UAV networks with distance-decaying density."""
try:
    from ._version import version as __version__
except ImportError:
    __version__ = "unknown"

from .analytic import (
    coverage_curve,
    local_coverage,
    overall_coverage,
    rate_threshold,
)
from .models import (
    ChannelParams,
    LinkClass,
    OptProblem,
    QuadSpec,
    Scenario,
    SimConfig,
    TierConfig,
    UserDensity,
)
from .optimize import InfeasibleError, alternate_maximization, grid_search
from .simulate import estimate_local_coverage, estimate_overall_coverage

__all__ = [
    "ChannelParams",
    "InfeasibleError",
    "LinkClass",
    "OptProblem",
    "QuadSpec",
    "Scenario",
    "SimConfig",
    "TierConfig",
    "UserDensity",
    "alternate_maximization",
    "coverage_curve",
    "estimate_local_coverage",
    "estimate_overall_coverage",
    "grid_search",
    "local_coverage",
    "overall_coverage",
    "rate_threshold",
]
