import logging
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Sequence

import numpy as np

from coexsim.models.channel import Interface, snr_db, snr_to_rate
from coexsim.models.deferral import DeferralState, record_window, reset_counters, select_retrain_set
from coexsim.models.lte import PfState, run_lte_window
from coexsim.models.optimizer import Capacities, OptimizerUe, RateAllocation, global_optimize
from coexsim.models.population import UeState
from coexsim.models.wifi import WifiStationState, new_station, run_wifi_window

if TYPE_CHECKING:
    from coexsim.config import SimConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WindowRates:
    """Per-UE rates for one window, indexed by UE id."""

    lte_rate: np.ndarray
    wifi_phy: np.ndarray
    associated: np.ndarray

    @classmethod
    def from_channel(cls, config: "SimConfig", positions: np.ndarray, fading: np.ndarray) -> "WindowRates":
        channel = config.channel
        lte_snr = snr_db(channel, positions, Interface.LTE, fading[:, 0])
        wifi_snr = snr_db(channel, positions, Interface.WIFI, fading[:, 1])
        lte_rate = snr_to_rate(lte_snr, config.lte_bandwidth, channel.efficiency, config.lte_peak_rate)
        wifi_phy = snr_to_rate(wifi_snr, config.wifi.bandwidth, channel.efficiency, config.wifi.phy_rate)
        return cls(lte_rate=lte_rate, wifi_phy=wifi_phy, associated=wifi_phy >= config.wifi.min_phy_rate)


@dataclass(frozen=True)
class RetrainEvent:
    window_index: int
    retrain_set: frozenset[int]
    flagged: frozenset[int]


def lte_ue_ids(population: Sequence[UeState]) -> list[int]:
    return [ue.ue_id for ue in population if ue.capability.has_lte]


def wifi_stations(population: Sequence[UeState], config: "SimConfig", rng: np.random.Generator) -> dict[int, WifiStationState]:
    """One station per WiFi-capable UE, created in id order."""
    return {
        ue.ue_id: new_station(ue.ue_id, config.wifi, rng)
        for ue in population
        if ue.capability.has_wifi
    }


def serve_lte(
    pf_state: PfState,
    ue_ids: Sequence[int],
    rates: WindowRates,
    config: "SimConfig",
    floors: np.ndarray | None = None,
    side_rates: dict[int, float] | None = None,
) -> tuple[PfState, dict[int, float]]:
    if not ue_ids:
        return pf_state, {}
    ids = np.asarray(ue_ids, dtype=int)
    side = None
    if side_rates:
        side = np.array([side_rates.get(int(ue), 0.0) for ue in ids])
    budget = np.full(len(ids), config.lte_cap * config.window_duration)
    pf_state, delivered = run_lte_window(
        pf_state,
        ids,
        rates.lte_rate[ids],
        config.num_rbs,
        config.tti,
        config.window_ttis,
        floors=floors,
        bit_budget=budget,
        side_rate=side,
    )
    return pf_state, {int(ue): float(bits) / config.window_duration for ue, bits in zip(ids, delivered)}


def serve_wifi(
    stations: dict[int, WifiStationState],
    ue_ids: Sequence[int],
    rates: WindowRates,
    config: "SimConfig",
    rng: np.random.Generator,
) -> dict[int, float]:
    contending = []
    for ue in ue_ids:
        station = stations[ue]
        station.phy_rate = float(rates.wifi_phy[ue])
        contending.append(station)
    if not contending:
        return {}
    budget = {s.ue_id: config.wifi_cap * config.window_duration for s in contending}
    return run_wifi_window(contending, config.wifi, config.window_duration, rng, bit_budget=budget)


@dataclass
class JointState:
    pf_state: PfState
    stations: dict[int, WifiStationState]
    deferral: DeferralState
    allocation: RateAllocation
    retrain_events: tuple[RetrainEvent, ...] = field(default_factory=tuple)
    wifi_rates: dict[int, float] = field(default_factory=dict)

    @classmethod
    def initial(cls, population: Sequence[UeState], config: "SimConfig", rng: np.random.Generator) -> "JointState":
        return cls(
            pf_state=PfState.initial(lte_ue_ids(population), tau=config.tau, epsilon=config.epsilon),
            stations=wifi_stations(population, config, rng),
            deferral=DeferralState.initial(
                (ue.ue_id for ue in population), config.r_min, config.count_max, config.counting
            ),
            allocation=RateAllocation.initial(population),
        )


def _capacities(config: "SimConfig") -> Capacities:
    return Capacities(
        lte_budget=1.0,
        mac_efficiency=config.mac_efficiency,
        lte_cap=config.lte_cap,
        wifi_cap=config.wifi_cap,
    )


def _optimizer_ues(population: Sequence[UeState], rates: WindowRates) -> list[OptimizerUe]:
    return [
        OptimizerUe(
            ue_id=ue.ue_id,
            capability=ue.capability,
            lte_rate=float(rates.lte_rate[ue.ue_id]) if ue.capability.has_lte else 0.0,
            wifi_phy=float(rates.wifi_phy[ue.ue_id])
            if ue.capability.has_wifi and rates.associated[ue.ue_id]
            else 0.0,
        )
        for ue in population
    ]


def joint_window(
    population: Sequence[UeState],
    state: JointState,
    rates: WindowRates,
    config: "SimConfig",
    rng: np.random.Generator,
    window_index: int,
) -> tuple[JointState, dict[int, float]]:
    """Serve one window under the current allocation, then run the deferral check.

    The allocation produced by a retraining applies from the next window on. LTE
    PF tracks each UE's combined rate, counting what it got over WiFi in the
    previous window.
    """
    allocation = state.allocation
    lte_ids = lte_ue_ids(population)
    floors = np.array([allocation.floor(ue) for ue in lte_ids])
    if not np.any(floors > 0):
        floors = None
    pf_state, lte_rates = serve_lte(state.pf_state, lte_ids, rates, config, floors, state.wifi_rates)

    wifi_ids = [
        ue.ue_id
        for ue in population
        if ue.capability.has_wifi and rates.associated[ue.ue_id] and allocation.is_wifi_member(ue.ue_id)
    ]
    wifi_rates = serve_wifi(state.stations, wifi_ids, rates, config, rng)

    achieved = {ue.ue_id: lte_rates.get(ue.ue_id, 0.0) + wifi_rates.get(ue.ue_id, 0.0) for ue in population}

    deferral, trigger = record_window(state.deferral, achieved)
    events = state.retrain_events
    if trigger:
        retrain_set = select_retrain_set(deferral, achieved)
        allocation = global_optimize(_optimizer_ues(population, rates), retrain_set, _capacities(config), config.r_min)
        deferral = reset_counters(deferral, retrain_set)
        events = events + (RetrainEvent(window_index, frozenset(retrain_set), allocation.flagged),)
        logger.debug(
            "window %d: retrained %d UEs, %d flagged, LTE share %.3f",
            window_index,
            len(retrain_set),
            len(allocation.flagged),
            allocation.total_share,
        )

    new_state = replace(
        state,
        pf_state=pf_state,
        deferral=deferral,
        allocation=allocation,
        retrain_events=events,
        wifi_rates=wifi_rates,
    )
    return new_state, achieved
