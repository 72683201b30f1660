from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from coexsim.config import SimConfig


class Capability(str, Enum):
    LTE_ONLY = "lte_only"
    WIFI_ONLY = "wifi_only"
    DUAL = "dual"

    @property
    def has_lte(self) -> bool:
        return self is not Capability.WIFI_ONLY

    @property
    def has_wifi(self) -> bool:
        return self is not Capability.LTE_ONLY


@dataclass
class UeState:
    ue_id: int
    capability: Capability
    position: float
    cumulative_bits: float = 0.0
    window_rates: list[float] = field(default_factory=list)

    def record(self, rate: float, window_duration: float) -> None:
        self.window_rates.append(rate)
        self.cumulative_bits += rate * window_duration

    def long_run_rate(self, total_time: float) -> float:
        return self.cumulative_bits / total_time


def build_population(config: "SimConfig", rng: np.random.Generator) -> list[UeState]:
    """K LTE-only, then M WiFi-only, then N dual UEs, area-uniform over the cell."""
    capabilities = (
        [Capability.LTE_ONLY] * config.k_lte_only
        + [Capability.WIFI_ONLY] * config.m_wifi_only
        + [Capability.DUAL] * config.n_dual
    )
    # 1 - u lies in (0, 1] so no UE sits exactly on the transmitter
    radii = config.channel.cell_radius * np.sqrt(1.0 - rng.random(len(capabilities)))
    return [
        UeState(ue_id=i, capability=cap, position=float(r))
        for i, (cap, r) in enumerate(zip(capabilities, radii))
    ]
