from dataclasses import dataclass
from enum import Enum

import numpy as np

from coexsim.errors import DomainError


class Interface(str, Enum):
    LTE = "lte"
    WIFI = "wifi"


@dataclass(frozen=True)
class ChannelParams:
    cell_radius: float = 250.0
    pathloss_exponent: float = 3.5
    ref_loss_db: float = 40.0
    noise_floor_dbm: float = -96.0
    tx_power_lte_dbm: float = 23.0
    tx_power_wifi_dbm: float = 14.0
    fading_enabled: bool = True
    fading_block_len: int = 1
    efficiency: float = 0.75

    def tx_power_dbm(self, interface: Interface) -> float:
        if interface is Interface.LTE:
            return self.tx_power_lte_dbm
        return self.tx_power_wifi_dbm


def snr_db(params: ChannelParams, distance, interface: Interface, fading_draw=1.0):
    """Log-distance path loss SNR, optionally scaled by a block-fading power draw.

    Accepts scalars or numpy arrays for ``distance`` and ``fading_draw``.
    """
    distance = np.asarray(distance, dtype=float)
    if np.any(distance <= 0):
        raise DomainError(f"distance must be positive, got {distance.min()}")
    if params.fading_enabled:
        fading_draw = np.asarray(fading_draw, dtype=float)
        if np.any(fading_draw <= 0):
            raise DomainError("fading draw must be positive")
    else:
        fading_draw = np.ones_like(distance)

    path_loss = params.ref_loss_db + 10 * params.pathloss_exponent * np.log10(distance)
    snr = (
        params.tx_power_dbm(interface)
        - path_loss
        - params.noise_floor_dbm
        + 10 * np.log10(fading_draw)
    )
    return float(snr) if snr.ndim == 0 else snr


def snr_to_rate(snr_db, bandwidth: float, efficiency: float, max_rate: float = float("inf")):
    """Truncated Shannon rate in bits/s, clamped at the link's peak rate."""
    if bandwidth <= 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth}")
    snr_linear = np.power(10.0, np.asarray(snr_db, dtype=float) / 10)
    rate = np.minimum(efficiency * bandwidth * np.log2(1 + snr_linear), max_rate)
    return float(rate) if rate.ndim == 0 else rate


def draw_fading(rng: np.random.Generator, num_ues: int) -> np.ndarray:
    """Unit-mean exponential power draws, one column per interface (LTE, WiFi)."""
    return np.maximum(rng.exponential(1.0, size=(num_ues, 2)), np.finfo(float).tiny)
