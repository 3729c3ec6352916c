"""Closed-form building blocks of the network model."""
from ..util import db_to_linear, dbm_to_watts, linear_to_db
from ._channel import (
    exclusion_distance,
    gamma_gain_laplace,
    horizontal_exclusion,
    link_probability,
    los_probability,
)
from ._density import expected_uav_count, mass_radius, uav_density, user_density
from ._geometry import half_angle, horizontal_distance, user_to_uav_distance

__all__ = [
    "db_to_linear",
    "dbm_to_watts",
    "exclusion_distance",
    "expected_uav_count",
    "gamma_gain_laplace",
    "half_angle",
    "horizontal_distance",
    "horizontal_exclusion",
    "linear_to_db",
    "link_probability",
    "los_probability",
    "mass_radius",
    "uav_density",
    "user_density",
    "user_to_uav_distance",
]
