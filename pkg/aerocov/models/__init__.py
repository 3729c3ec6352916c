from ._channel import ChannelParams
from ._link import LinkClass
from ._problem import OptProblem
from ._quad import QuadSpec
from ._scenario import Scenario
from ._sim import SimConfig
from ._tier import TierConfig, UserDensity

__all__ = [
    "ChannelParams",
    "LinkClass",
    "OptProblem",
    "QuadSpec",
    "Scenario",
    "SimConfig",
    "TierConfig",
    "UserDensity",
]
