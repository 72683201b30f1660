from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from coexsim.errors import DomainError

IDLE_RB = -1


@dataclass(frozen=True)
class PfState:
    """EWMA of delivered throughput per tracked UE, the PF metric denominator."""

    ue_ids: np.ndarray
    avg_throughput: np.ndarray
    tau: float = 100.0
    epsilon: float = 1.0
    _index: dict[int, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self._index:
            self._index.update({int(ue): i for i, ue in enumerate(self.ue_ids)})

    @classmethod
    def initial(cls, ue_ids, tau: float = 100.0, epsilon: float = 1.0) -> "PfState":
        ids = np.sort(np.asarray(list(ue_ids), dtype=int))
        return cls(ue_ids=ids, avg_throughput=np.full(len(ids), float(epsilon)), tau=tau, epsilon=epsilon)

    def rows(self, ue_ids) -> np.ndarray:
        return np.array([self._index[int(ue)] for ue in ue_ids], dtype=int)

    def average(self, ue_id: int) -> float:
        return float(self.avg_throughput[self._index[int(ue_id)]])

    def with_averages(self, avg_throughput: np.ndarray) -> "PfState":
        return PfState(
            ue_ids=self.ue_ids,
            avg_throughput=avg_throughput,
            tau=self.tau,
            epsilon=self.epsilon,
            _index=self._index,
        )


@dataclass(frozen=True)
class CandidateRates:
    """UEs competing in one TTI with their per-RB instantaneous rates (bits/s)."""

    ue_ids: np.ndarray
    rb_rates: np.ndarray

    @classmethod
    def flat(cls, rates: Mapping[int, float], num_rbs: int) -> "CandidateRates":
        ids = np.array(sorted(rates), dtype=int)
        per_rb = np.array([rates[ue] for ue in ids], dtype=float).reshape(-1, 1)
        return cls(ue_ids=ids, rb_rates=np.repeat(per_rb, num_rbs, axis=1))

    def __len__(self) -> int:
        return len(self.ue_ids)


@dataclass(frozen=True)
class TtiAllocation:
    assignment: np.ndarray
    achieved: dict[int, float]

    def rbs_won(self, ue_id: int) -> int:
        return int(np.count_nonzero(self.assignment == ue_id))


def pf_metric(inst_rate, avg_throughput):
    avg_throughput = np.asarray(avg_throughput, dtype=float)
    if np.any(avg_throughput <= 0):
        raise DomainError("average throughput must be positive")
    metric = np.asarray(inst_rate, dtype=float) / avg_throughput
    return float(metric) if metric.ndim == 0 else metric


def allocate_tti(
    candidates: CandidateRates, state: PfState, num_rbs: int, tti: float = 1e-3
) -> TtiAllocation:
    """Give each RB to the candidate with the highest PF metric on it.

    Candidates are ordered by ascending UE id so argmax ties go to the lowest id.
    """
    if num_rbs < 1:
        raise DomainError(f"num_rbs must be at least 1, got {num_rbs}")
    if len(candidates) == 0:
        return TtiAllocation(assignment=np.full(num_rbs, IDLE_RB, dtype=int), achieved={})

    order = np.argsort(candidates.ue_ids, kind="stable")
    ue_ids = candidates.ue_ids[order]
    rb_rates = candidates.rb_rates[order, :num_rbs]
    avg = state.avg_throughput[state.rows(ue_ids)]

    metrics = pf_metric(rb_rates, avg[:, None])
    winners = np.argmax(metrics, axis=0)
    assignment = ue_ids[winners]

    won_bits = np.zeros(len(ue_ids))
    np.add.at(won_bits, winners, rb_rates[winners, np.arange(num_rbs)] * tti)
    achieved = {int(ue_ids[i]): float(won_bits[i]) for i in np.unique(winners)}
    return TtiAllocation(assignment=assignment, achieved=achieved)


def _ewma(avg: np.ndarray, achieved_rate: np.ndarray, tau: float, epsilon: float) -> np.ndarray:
    updated = (1 - 1 / tau) * avg + (1 / tau) * achieved_rate
    return np.maximum(updated, epsilon)


def update_average(state: PfState, achieved: Mapping[int, float]) -> PfState:
    """EWMA step for every tracked UE; UEs absent from ``achieved`` count as rate 0."""
    achieved_rate = np.zeros(len(state.ue_ids))
    for ue, rate in achieved.items():
        achieved_rate[state.rows([ue])[0]] = rate
    return state.with_averages(_ewma(state.avg_throughput, achieved_rate, state.tau, state.epsilon))


def _take_credit(credit: np.ndarray, active: np.ndarray, free: int) -> np.ndarray:
    wanted = np.where(active, np.floor(credit), 0).astype(int)
    reserved = np.zeros_like(wanted)
    for i in np.argsort(-credit, kind="stable"):
        if free == 0:
            break
        take = min(wanted[i], free)
        reserved[i] = take
        free -= take
    credit -= reserved
    return reserved


@dataclass
class RbCredits:
    """Per-window RB reservation bookkeeping for the guaranteed part of LTE shares.

    Only ``floors`` are reserved. Credit starts at one RB so a UE ends the window
    with at least ``floor * num_rbs * window_ttis`` RBs as long as the floors fit
    the carrier.
    """

    floors: np.ndarray
    num_rbs: int
    credit: np.ndarray = field(init=False)

    def __post_init__(self):
        self.credit = np.where(self.floors > 0, 1.0, 0.0)

    def reserve(self, active: np.ndarray) -> np.ndarray:
        self.credit += self.floors * self.num_rbs
        return _take_credit(self.credit, active, self.num_rbs)


def run_lte_window(
    state: PfState,
    ue_ids: np.ndarray,
    rates: np.ndarray,
    num_rbs: int,
    tti: float,
    window_ttis: int,
    floors: np.ndarray | None = None,
    bit_budget: np.ndarray | None = None,
    side_rate: np.ndarray | None = None,
) -> tuple[PfState, np.ndarray]:
    """Schedule one window of TTIs over ``ue_ids`` with flat full-band ``rates``.

    Returns the updated PF state and the bits delivered to each UE. UEs with a
    positive floor get reserved RBs; every other RB is contended by PF over all
    active UEs, reserved ones included.

    ``side_rate`` is what each UE currently gets over another interface. It is
    added to the tracked throughput every TTI so PF balances combined rates.
    """
    ue_ids = np.asarray(ue_ids, dtype=int)
    rb_rates = np.asarray(rates, dtype=float) / num_rbs
    delivered = np.zeros(len(ue_ids))
    budget = np.full(len(ue_ids), np.inf) if bit_budget is None else np.asarray(bit_budget, dtype=float)
    credits = None
    if floors is not None:
        credits = RbCredits(floors=np.asarray(floors, dtype=float), num_rbs=num_rbs)
    rows = state.rows(ue_ids)
    side = np.zeros(len(ue_ids)) if side_rate is None else np.asarray(side_rate, dtype=float)
    tracked_rate = np.zeros(len(state.ue_ids))

    for _ in range(window_ttis):
        active = (delivered < budget) & (rb_rates > 0)
        bits = np.zeros(len(ue_ids))
        open_rbs = num_rbs
        if credits is not None:
            reserved = credits.reserve(active)
            bits += reserved * rb_rates * tti
            open_rbs -= int(reserved.sum())

        if open_rbs > 0 and active.any():
            contenders = np.flatnonzero(active)
            candidates = CandidateRates(
                ue_ids=ue_ids[contenders],
                rb_rates=np.repeat(rb_rates[contenders, None], open_rbs, axis=1),
            )
            allocation = allocate_tti(candidates, state, open_rbs, tti)
            for i in contenders:
                bits[i] += allocation.achieved.get(int(ue_ids[i]), 0.0)

        bits = np.minimum(bits, budget - delivered)
        delivered += bits
        tracked_rate[:] = 0
        tracked_rate[rows] = bits / tti + side
        state = state.with_averages(_ewma(state.avg_throughput, tracked_rate, state.tau, state.epsilon))

    return state, delivered
