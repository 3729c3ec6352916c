"""Seeded Monte-Carlo ground truth for the analytic engine."""
from ._deploy import (
    Deployment,
    classify_links,
    deploy,
    resolve_sim_radius,
    sample_gain,
    sample_tier,
    sample_users,
)
from ._estimate import (
    McEstimate,
    association_frequencies,
    empirical_cdf,
    empirical_interference_laplace,
    empirical_tagged_distance,
    estimate_local_coverage,
    estimate_overall_coverage,
    run_trials,
)
from ._snapshot import Association, associate, link_budget, realize_sinr

__all__ = [
    "Association",
    "Deployment",
    "McEstimate",
    "associate",
    "association_frequencies",
    "classify_links",
    "deploy",
    "empirical_cdf",
    "empirical_interference_laplace",
    "empirical_tagged_distance",
    "estimate_local_coverage",
    "estimate_overall_coverage",
    "link_budget",
    "realize_sinr",
    "resolve_sim_radius",
    "run_trials",
    "sample_gain",
    "sample_tier",
    "sample_users",
]
