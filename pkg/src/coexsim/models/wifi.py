import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class WifiParams:
    slot_time: float = 9e-6
    cw_min: int = 16
    cw_max: int = 1024
    max_stage: int = 6
    payload_bits: int = 12000
    success_overhead: float = 250e-6
    collision_overhead: float = 100e-6
    phy_rate: float = 54e6
    rts_enabled: bool = True
    bandwidth: float = 20e6
    min_phy_rate: float = 6e6


@dataclass
class WifiStationState:
    ue_id: int
    stage: int = 0
    backoff: int = 0
    delivered_bits: float = 0.0
    phy_rate: float = 0.0


class SlotKind(str, Enum):
    IDLE = "idle"
    SUCCESS = "success"
    COLLISION = "collision"


@dataclass(frozen=True)
class SlotOutcome:
    kind: SlotKind
    ue_ids: tuple[int, ...]
    duration: float


def contention_window(stage: int, params: WifiParams) -> int:
    return min(2**stage * params.cw_min, params.cw_max) - 1


def draw_backoff(rng: np.random.Generator, upper: int) -> int:
    return int(rng.integers(0, upper + 1))


def new_station(ue_id: int, params: WifiParams, rng: np.random.Generator, phy_rate: float | None = None) -> WifiStationState:
    return WifiStationState(
        ue_id=ue_id,
        backoff=draw_backoff(rng, contention_window(0, params)),
        phy_rate=params.phy_rate if phy_rate is None else phy_rate,
    )


def _success_duration(station: WifiStationState, params: WifiParams) -> float:
    phy_rate = station.phy_rate or params.phy_rate
    return params.slot_time + params.success_overhead + params.payload_bits / phy_rate


def step_slot(
    stations: Sequence[WifiStationState], params: WifiParams, rng: np.random.Generator
) -> SlotOutcome:
    """Advance saturated DCF contention by one slot, mutating station state."""
    ready = [s for s in stations if s.backoff == 0]

    if not ready:
        for s in stations:
            s.backoff -= 1
        return SlotOutcome(SlotKind.IDLE, (), params.slot_time)

    if len(ready) == 1:
        winner = ready[0]
        winner.delivered_bits += params.payload_bits
        winner.stage = 0
        winner.backoff = draw_backoff(rng, contention_window(0, params))
        return SlotOutcome(SlotKind.SUCCESS, (winner.ue_id,), _success_duration(winner, params))

    for s in ready:
        s.stage = min(s.stage + 1, params.max_stage)
        s.backoff = draw_backoff(rng, contention_window(s.stage, params))
    return SlotOutcome(
        SlotKind.COLLISION,
        tuple(s.ue_id for s in ready),
        params.slot_time + params.collision_overhead,
    )


def run_wifi_window(
    stations: Sequence[WifiStationState],
    params: WifiParams,
    window_duration: float,
    rng: np.random.Generator,
    bit_budget: Mapping[int, float] | None = None,
) -> dict[int, float]:
    """Contend for ``window_duration`` seconds and return throughput per station.

    Runs of idle slots are skipped in one step; they draw nothing from ``rng`` so
    the outcome equals repeated ``step_slot`` calls. A station whose ``bit_budget``
    is spent stops contending for the rest of the window. A frame that would end
    after the window is not started; its station keeps a zero backoff and sends
    it first thing in the next window.
    """
    start_bits = {s.ue_id: s.delivered_bits for s in stations}
    budget = bit_budget or {}
    contending = [s for s in stations if budget.get(s.ue_id, math.inf) > 0]
    elapsed = 0.0

    while contending and elapsed < window_duration:
        idle_run = min(s.backoff for s in contending)
        if idle_run > 0:
            idle_run = min(idle_run, math.ceil((window_duration - elapsed) / params.slot_time))
            for s in contending:
                s.backoff -= idle_run
            elapsed += idle_run * params.slot_time
            continue

        ready = [s for s in contending if s.backoff == 0]
        if len(ready) == 1 and elapsed + _success_duration(ready[0], params) > window_duration:
            break

        outcome = step_slot(contending, params, rng)
        elapsed += outcome.duration
        if outcome.kind is SlotKind.SUCCESS and budget:
            winner = next(s for s in contending if s.ue_id == outcome.ue_ids[0])
            limit = start_bits[winner.ue_id] + budget.get(winner.ue_id, math.inf)
            if winner.delivered_bits >= limit:
                winner.delivered_bits = limit
                contending.remove(winner)

    return {s.ue_id: (s.delivered_bits - start_bits[s.ue_id]) / window_duration for s in stations}


def estimate_mac_efficiency(
    params: WifiParams, phy_rates: Sequence[float], duration: float, rng: np.random.Generator
) -> float:
    """Aggregate DCF throughput over the mean phy rate of the contending stations."""
    stations = [new_station(i, params, rng, phy_rate=rate) for i, rate in enumerate(phy_rates)]
    if not stations:
        return 0.0
    throughput = run_wifi_window(stations, params, duration, rng)
    return sum(throughput.values()) / float(np.mean(phy_rates))
