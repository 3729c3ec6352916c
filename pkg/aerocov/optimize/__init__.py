"""Constrained choice of per-tier UAV concentration."""
from ._constraints import (
    CountCheck,
    FloorCheck,
    beta_for_count,
    count_constraint,
    default_z_grid,
    floor_constraint,
)
from ._result import InfeasibleError, OptResult
from ._search import (
    Evaluator,
    alternate_maximization,
    beta_dims,
    default_start,
    grid_search,
)

__all__ = [
    "CountCheck",
    "Evaluator",
    "FloorCheck",
    "InfeasibleError",
    "OptResult",
    "alternate_maximization",
    "beta_dims",
    "beta_for_count",
    "count_constraint",
    "default_start",
    "default_z_grid",
    "floor_constraint",
    "grid_search",
]
