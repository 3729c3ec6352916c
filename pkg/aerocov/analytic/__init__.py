"""Analytical coverage of the K-tier inhomogeneous UAV network."""
from ._association import (
    association_frequency,
    association_probability,
    serving_integral,
)
from ._coverage import (
    CoveragePoint,
    conditional_coverage,
    coverage_curve,
    local_coverage,
    local_coverage_approx,
    local_coverage_exact,
    mu_threshold,
    overall_coverage,
    overall_from_local,
    tier_thresholds,
)
from ._laplace import (
    exp_derivatives,
    interference_exponents,
    interference_laplace,
    laplace_derivatives,
    signal_laplace,
    w_derivatives,
)
from ._tagged import (
    TaggedDistanceDistribution,
    disc_mass,
    link_intensity,
    mass_rate,
    plane_mass,
    tagged_cdf,
    tagged_horizon,
    tagged_pdf,
)
from ._thresholds import (
    energy_efficiency_threshold,
    energy_efficiency_thresholds,
    rate_threshold,
)

__all__ = [
    "CoveragePoint",
    "TaggedDistanceDistribution",
    "association_frequency",
    "association_probability",
    "conditional_coverage",
    "coverage_curve",
    "disc_mass",
    "energy_efficiency_threshold",
    "energy_efficiency_thresholds",
    "exp_derivatives",
    "interference_exponents",
    "interference_laplace",
    "laplace_derivatives",
    "link_intensity",
    "local_coverage",
    "local_coverage_approx",
    "local_coverage_exact",
    "mass_rate",
    "mu_threshold",
    "overall_coverage",
    "overall_from_local",
    "plane_mass",
    "rate_threshold",
    "serving_integral",
    "signal_laplace",
    "tagged_cdf",
    "tagged_horizon",
    "tagged_pdf",
    "tier_thresholds",
    "w_derivatives",
]
