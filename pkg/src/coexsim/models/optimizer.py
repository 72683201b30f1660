import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from coexsim.models.population import Capability

EXHAUSTIVE_DUALS = 8
STEERING_PASSES = 3
_SATISFIED_RTOL = 1e-9


@dataclass(frozen=True)
class OptimizerUe:
    """One UE as the optimizer sees it: full-band LTE rate and WiFi phy rate (0 when unassociated)."""

    ue_id: int
    capability: Capability
    lte_rate: float = 0.0
    wifi_phy: float = 0.0

    @property
    def associated(self) -> bool:
        return self.capability.has_wifi and self.wifi_phy > 0


@dataclass(frozen=True)
class Capacities:
    lte_budget: float = 1.0
    mac_efficiency: float = 0.55
    lte_cap: float = 0.8e6
    wifi_cap: float = 0.8e6


@dataclass(frozen=True)
class RateAllocation:
    lte_share: dict[int, float] = field(default_factory=dict)
    lte_floor: dict[int, float] = field(default_factory=dict)
    wifi_member: dict[int, bool] = field(default_factory=dict)
    projected_rate: dict[int, float] = field(default_factory=dict)
    flagged: frozenset[int] = frozenset()

    @classmethod
    def initial(cls, ues: Iterable) -> "RateAllocation":
        """No reserved shares and every WiFi-capable UE contending."""
        return cls(wifi_member={ue.ue_id: ue.capability.has_wifi for ue in ues})

    @classmethod
    def empty(cls) -> "RateAllocation":
        return cls()

    def share(self, ue_id: int) -> float:
        return self.lte_share.get(ue_id, 0.0)

    def floor(self, ue_id: int) -> float:
        return self.lte_floor.get(ue_id, 0.0)

    def is_wifi_member(self, ue_id: int) -> bool:
        return self.wifi_member.get(ue_id, False)

    @property
    def total_share(self) -> float:
        return float(sum(self.lte_share.values()))

    @property
    def system_rate(self) -> float:
        return float(sum(self.projected_rate.values()))


class _Problem:
    def __init__(self, ues: list[OptimizerUe], retrain_set: set[int], capacities: Capacities, r_min: float):
        self.ues = sorted(ues, key=lambda ue: ue.ue_id)
        self.capacities = capacities
        self.r_min = r_min
        self.ids = np.array([ue.ue_id for ue in self.ues], dtype=int)
        self.lte_capable = np.array([ue.capability.has_lte for ue in self.ues], dtype=bool)
        self.dual = np.array([ue.capability is Capability.DUAL for ue in self.ues], dtype=bool)
        self.lte_rate = np.where(self.lte_capable, [max(ue.lte_rate, 0.0) for ue in self.ues], 0.0)
        self.phy = np.array([ue.wifi_phy if ue.associated else 0.0 for ue in self.ues], dtype=float)
        self.retrain = np.array([ue.ue_id in retrain_set for ue in self.ues], dtype=bool)

    def wifi_parts(self, members: np.ndarray) -> np.ndarray:
        n = int(members.sum())
        if n == 0:
            return np.zeros(len(self.ues))
        per_member = np.minimum(self.capacities.wifi_cap, self.phy * self.capacities.mac_efficiency / n)
        return np.where(members, per_member, 0.0)

    def satisfied(self, projected: np.ndarray) -> np.ndarray:
        return projected >= self.r_min * (1 - _SATISFIED_RTOL)

    def lte_floors(self, wifi: np.ndarray) -> np.ndarray:
        need = np.maximum(self.r_min - wifi, 0.0)
        reachable = self.lte_capable & (self.lte_rate > 0) & (need <= self.capacities.lte_cap)
        safe_rate = np.where(self.lte_rate > 0, self.lte_rate, 1.0)
        return np.where(need == 0, 0.0, np.where(reachable, need / safe_rate, np.inf))

    def admit_wifi(self) -> np.ndarray:
        """Greedy WiFi membership: WiFi-only UEs, then duals whose cheapest interface is WiFi."""
        members = (self.phy > 0) & ~self.dual
        eff = self.capacities.mac_efficiency
        with np.errstate(divide="ignore"):
            cost_lte = np.where(self.lte_rate > 0, self.r_min / np.where(self.lte_rate > 0, self.lte_rate, 1.0), np.inf)
            cost_wifi = np.where(self.phy > 0, self.r_min / (np.where(self.phy > 0, self.phy, 1.0) * eff), np.inf)
        cheapest = np.minimum(cost_lte, cost_wifi)

        candidates = np.flatnonzero(self.dual & (self.phy > 0))
        order = sorted(candidates, key=lambda i: (not self.retrain[i], cheapest[i], self.ids[i]))
        for i in order:
            if cost_wifi[i] >= cost_lte[i]:
                continue
            trial = members.copy()
            trial[i] = True
            before = self.wifi_parts(members)
            after = self.wifi_parts(trial)
            if after[i] < self.r_min:
                continue
            if np.any(members & self.satisfied(before) & ~self.satisfied(after)):
                continue
            members = trial
        return members

    def solve(self, members: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        caps = self.capacities
        wifi = self.wifi_parts(members)
        floors = self.lte_floors(wifi)
        shares = np.zeros(len(self.ues))

        needy = np.flatnonzero(np.isfinite(floors) & (floors > 0))
        if floors[needy].sum() <= caps.lte_budget:
            shares[needy] = floors[needy]
        else:
            remaining = caps.lte_budget
            for i in sorted(needy, key=lambda i: (not self.retrain[i], floors[i], self.ids[i])):
                if floors[i] <= remaining:
                    shares[i] = floors[i]
                    remaining -= floors[i]

        granted = shares.copy()
        remaining = caps.lte_budget - shares.sum()
        safe_rate = np.where(self.lte_rate > 0, self.lte_rate, 1.0)
        headroom = np.where(self.lte_rate > 0, np.maximum(caps.lte_cap / safe_rate - shares, 0.0), 0.0)
        for i in np.lexsort((self.ids, -self.lte_rate)):
            if remaining <= 0:
                break
            add = min(remaining, headroom[i])
            shares[i] += add
            remaining -= add

        projected = np.minimum(caps.lte_cap, shares * self.lte_rate) + wifi
        return granted, shares, projected

    def score(self, projected: np.ndarray) -> tuple[int, float]:
        return int(self.satisfied(projected).sum()), float(projected.sum())

    def steer(self, members: np.ndarray) -> np.ndarray:
        duals = np.flatnonzero(self.dual & (self.phy > 0))
        best_members = members
        best_score = self.score(self.solve(members)[2])

        if len(duals) <= EXHAUSTIVE_DUALS:
            for bits in itertools.product((False, True), repeat=len(duals)):
                trial = members.copy()
                trial[duals] = bits
                score = self.score(self.solve(trial)[2])
                if score > best_score:
                    best_members, best_score = trial, score
            return best_members

        order = sorted(duals, key=lambda i: (-self.phy[i], self.ids[i]))
        for _ in range(STEERING_PASSES):
            improved = False
            for i in order:
                trial = best_members.copy()
                trial[i] = not trial[i]
                score = self.score(self.solve(trial)[2])
                if score > best_score:
                    best_members, best_score = trial, score
                    improved = True
            if not improved:
                break
        return best_members


def global_optimize(
    ues: Iterable[OptimizerUe],
    retrain_set: set[int],
    capacities: Capacities,
    r_min: float,
) -> RateAllocation:
    """Fluid two-phase heuristic for maximizing total rate with an ``r_min`` floor per UE.

    Phase one picks WiFi members and grants each LTE-capable UE the RB share that
    lifts it to ``r_min``; phase two hands leftover share to the fastest LTE links up
    to ``lte_cap`` and steers dual UEs between interfaces when that helps. UEs the
    plan cannot lift to ``r_min`` are reported in ``flagged``. Only the phase-one
    floors are reserved when the plan is served; the rest of each share projects
    what PF hands out from the unreserved RBs.
    """
    ues = list(ues)
    if not ues:
        return RateAllocation.empty()

    problem = _Problem(ues, set(retrain_set), capacities, r_min)
    members = problem.steer(problem.admit_wifi())
    floors, shares, projected = problem.solve(members)
    satisfied = problem.satisfied(projected)

    return RateAllocation(
        lte_share={int(ue): float(s) for ue, s, ok in zip(problem.ids, shares, problem.lte_capable) if ok},
        lte_floor={int(ue): float(f) for ue, f, ok in zip(problem.ids, floors, problem.lte_capable) if ok},
        # steering only decides for associated duals; everyone else keeps contending
        wifi_member={
            int(ue.ue_id): bool(member) if ue.capability is Capability.DUAL and ue.associated else True
            for ue, member in zip(problem.ues, members)
            if ue.capability.has_wifi
        },
        projected_rate={int(ue): float(r) for ue, r in zip(problem.ids, projected)},
        flagged=frozenset(int(ue) for ue, ok in zip(problem.ids, satisfied) if not ok),
    )
