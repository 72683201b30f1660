from .channel import ChannelParams, Interface
from .lte import PfState
from .optimizer import RateAllocation, global_optimize
from .population import Capability, UeState, build_population
from .wifi import WifiParams, WifiStationState

__all__ = [
    "ChannelParams",
    "Interface",
    "PfState",
    "RateAllocation",
    "global_optimize",
    "Capability",
    "UeState",
    "build_population",
    "WifiParams",
    "WifiStationState",
]
