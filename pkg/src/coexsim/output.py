import csv
import os
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, TextIO

import orjson

from coexsim.engine import SimReport
from coexsim.metrics import STAT_ROWS, SchedulerStats

PER_UE_HEADER = ("ue_id", "capability", "position_m", "window_index", "rate_bps")
STATS_HEADER = ("mode", "seed", "num_ues") + tuple(label for _, label in STAT_ROWS)
COMPARISON_HEADER = ("metric", "lte", "wifi", "joint", "joint_over_lte", "joint_over_wifi")


@dataclass
class RunManifest:
    config_digest: str
    seed: int
    seeds: list[int]
    modes: list[str]
    output_dir: str
    tool_version: str
    files: list[str] = field(default_factory=list)


def per_ue_filename(mode: str, seed: int) -> str:
    return f"per_ue_{mode}_{seed}.csv"


def stats_filename(mode: str, seed: int) -> str:
    return f"stats_{mode}_{seed}.csv"


COMPARISON_FILENAME = "comparison.csv"
MANIFEST_FILENAME = "manifest.json"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_atomic(path: Path, write: Callable[[TextIO], None]) -> None:
    """Write through a temp file in the target directory, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            write(f)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _write_rows(path: Path, header: Iterable[str], rows: Iterable[Iterable]) -> None:
    def write(f: TextIO) -> None:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])

    write_atomic(path, write)


def write_per_ue(path: Path, report: SimReport) -> None:
    rows = (
        (ue.ue_id, ue.capability.value, ue.position, window, rate)
        for ue in report.population
        for window, rate in enumerate(ue.window_rates)
    )
    _write_rows(path, PER_UE_HEADER, rows)


def stats_row(mode: str, seed: int, stats: SchedulerStats) -> tuple:
    return (mode, seed, stats.num_ues) + tuple(getattr(stats, attr) for attr, _ in STAT_ROWS)


def write_stats(path: Path, report: SimReport) -> None:
    _write_rows(path, STATS_HEADER, [stats_row(report.mode.value, report.seed, report.stats)])


def write_comparison(path: Path, rows: list[dict]) -> None:
    _write_rows(path, COMPARISON_HEADER, ([row[col] for col in COMPARISON_HEADER] for row in rows))


def write_manifest(path: Path, manifest: RunManifest) -> None:
    payload = orjson.dumps(asdict(manifest), option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)
    write_atomic(path, lambda f: f.write(payload.decode()))
