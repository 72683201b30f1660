import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Mapping

Counting = Literal["consecutive", "cumulative"]


@dataclass(frozen=True)
class DeferralState:
    """Per-UE count of windows spent below ``r_min``."""

    r_min: float
    count_max: float = 5
    counting: Counting = "consecutive"
    violation_count: dict[int, int] = field(default_factory=dict)

    @classmethod
    def initial(cls, ue_ids: Iterable[int], r_min: float, count_max: float = 5, counting: Counting = "consecutive") -> "DeferralState":
        return cls(r_min=r_min, count_max=count_max, counting=counting, violation_count={int(ue): 0 for ue in ue_ids})

    def count(self, ue_id: int) -> int:
        return self.violation_count.get(ue_id, 0)

    @property
    def at_limit(self) -> set[int]:
        if math.isinf(self.count_max):
            return set()
        return {ue for ue, n in self.violation_count.items() if n >= self.count_max}


def _is_violation(rate: float, r_min: float) -> bool:
    return rate < r_min


def record_window(state: DeferralState, achieved: Mapping[int, float]) -> tuple[DeferralState, bool]:
    counts = dict(state.violation_count)
    for ue, rate in achieved.items():
        if _is_violation(rate, state.r_min):
            counts[ue] = counts.get(ue, 0) + 1
        elif state.counting == "consecutive":
            counts[ue] = 0
        else:
            counts.setdefault(ue, 0)

    updated = replace(state, violation_count=counts)
    return updated, bool(updated.at_limit)


def select_retrain_set(state: DeferralState, achieved: Mapping[int, float]) -> set[int]:
    """UEs at ``count_max`` plus every UE below ``r_min`` this window.

    Empty when nothing has reached ``count_max``.
    """
    triggered = state.at_limit
    if not triggered:
        return set()
    below = {ue for ue, rate in achieved.items() if _is_violation(rate, state.r_min)}
    return triggered | below


def reset_counters(state: DeferralState, ue_ids: Iterable[int]) -> DeferralState:
    counts = dict(state.violation_count)
    for ue in ue_ids:
        counts[ue] = 0
    return replace(state, violation_count=counts)
