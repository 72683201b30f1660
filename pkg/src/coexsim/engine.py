import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from coexsim.config import SimConfig, validate_config
from coexsim.errors import DomainError
from coexsim.metrics import SchedulerStats, compute_stats
from coexsim.models.channel import draw_fading
from coexsim.models.joint import (
    JointState,
    RetrainEvent,
    WindowRates,
    joint_window,
    lte_ue_ids,
    serve_lte,
    serve_wifi,
    wifi_stations,
)
from coexsim.models.lte import PfState
from coexsim.models.population import UeState, build_population

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    LTE = "lte"
    WIFI = "wifi"
    JOINT = "joint"


@dataclass
class SimReport:
    mode: Mode
    seed: int
    population: list[UeState]
    stats: SchedulerStats
    retrain_events: tuple[RetrainEvent, ...] = field(default_factory=tuple)

    @property
    def per_ue_series(self) -> dict[int, list[float]]:
        return {ue.ue_id: ue.window_rates for ue in self.population}


@dataclass
class _Streams:
    placement: np.random.Generator
    channel: np.random.Generator
    mac: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "_Streams":
        placement, channel, mac = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3))
        return cls(placement=placement, channel=channel, mac=mac)


def _fading(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    if not config.channel.fading_enabled:
        return np.ones((config.num_ues, 2))
    return draw_fading(rng, config.num_ues)


def run(config: SimConfig, mode: Mode | str) -> SimReport:
    mode = Mode(mode)
    validate_config(config)
    if config.total_windows == 0:
        raise DomainError("cannot compute statistics over zero windows")

    streams = _Streams.from_seed(config.seed)
    population = build_population(config, streams.placement)
    positions = np.array([ue.position for ue in population])
    lte_ids = lte_ue_ids(population)
    wifi_ids = [ue.ue_id for ue in population if ue.capability.has_wifi]

    logger.info("starting %s run, seed %d, %d UEs, %d windows", mode.value, config.seed, config.num_ues, config.total_windows)

    pf_state = PfState.initial(lte_ids, tau=config.tau, epsilon=config.epsilon) if mode is Mode.LTE else None
    stations = wifi_stations(population, config, streams.mac) if mode is Mode.WIFI else None
    joint = JointState.initial(population, config, streams.mac) if mode is Mode.JOINT else None

    fading = None
    for window in range(config.total_windows):
        if window % config.channel.fading_block_len == 0:
            fading = _fading(config, streams.channel)
        rates = WindowRates.from_channel(config, positions, fading)

        if mode is Mode.LTE:
            pf_state, achieved = serve_lte(pf_state, lte_ids, rates, config)
        elif mode is Mode.WIFI:
            associated = [ue for ue in wifi_ids if rates.associated[ue]]
            achieved = serve_wifi(stations, associated, rates, config, streams.mac)
        else:
            joint, achieved = joint_window(population, joint, rates, config, streams.mac, window)

        for ue in population:
            ue.record(achieved.get(ue.ue_id, 0.0), config.window_duration)

    long_run = {ue.ue_id: ue.long_run_rate(config.total_time) for ue in population}
    stats = compute_stats(long_run, config.r_min)
    events = joint.retrain_events if joint is not None else ()

    logger.info(
        "finished %s run, seed %d: system %.0f bit/s, %d below threshold, %d retrainings",
        mode.value,
        config.seed,
        stats.system_throughput,
        stats.users_below_threshold,
        len(events),
    )
    return SimReport(mode=mode, seed=config.seed, population=population, stats=stats, retrain_events=events)
