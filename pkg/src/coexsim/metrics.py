from dataclasses import dataclass, fields
from typing import Mapping, Sequence

import numpy as np

from coexsim.errors import DomainError

COMPARISON_MODES = ("lte", "wifi", "joint")


@dataclass(frozen=True)
class SchedulerStats:
    num_ues: int
    users_below_threshold: float
    system_throughput: float
    max_throughput: float
    min_throughput: float
    std_dev: float

    @property
    def mean_throughput(self) -> float:
        return self.system_throughput / self.num_ues


# Row order and labels of the comparison table
STAT_ROWS = (
    ("users_below_threshold", "users_below_threshold"),
    ("system_throughput", "system_throughput_bps"),
    ("max_throughput", "max_throughput_bps"),
    ("min_throughput", "min_throughput_bps"),
    ("std_dev", "std_dev_bps"),
)


def compute_stats(rates: Mapping[int, float], r_min: float) -> SchedulerStats:
    """Scheduler statistics over long-run per-UE rates; std is the population std."""
    if not rates:
        raise DomainError("cannot compute statistics over zero UEs")
    values = np.array(sorted(rates.values()), dtype=float)
    return SchedulerStats(
        num_ues=len(values),
        users_below_threshold=int(np.count_nonzero(values < r_min)),
        system_throughput=float(values.sum()),
        max_throughput=float(values.max()),
        min_throughput=float(values.min()),
        std_dev=float(values.std()),
    )


def mean_stats(stats: Sequence[SchedulerStats]) -> SchedulerStats:
    if not stats:
        raise DomainError("cannot average zero runs")
    averaged = {f.name: float(np.mean([getattr(s, f.name) for s in stats])) for f in fields(SchedulerStats)}
    averaged["num_ues"] = stats[0].num_ues
    return SchedulerStats(**averaged)


def _ratio(numerator: float, denominator: float) -> float | None:
    if denominator == 0:
        return None
    return numerator / denominator


def comparison_rows(by_mode: Mapping[str, SchedulerStats]) -> list[dict]:
    """One row per statistic with a column per mode plus joint/lte and joint/wifi ratios."""
    rows = []
    for attr, label in STAT_ROWS:
        values = {mode: getattr(by_mode[mode], attr) for mode in COMPARISON_MODES}
        rows.append(
            {
                "metric": label,
                **values,
                "joint_over_lte": _ratio(values["joint"], values["lte"]),
                "joint_over_wifi": _ratio(values["joint"], values["wifi"]),
            }
        )
    return rows
