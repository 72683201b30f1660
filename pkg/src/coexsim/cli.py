import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from coexsim import __version__
from coexsim.config import SimConfig, config_digest, parse_config
from coexsim.engine import Mode, run
from coexsim.errors import CoexsimError, ConfigError
from coexsim.metrics import comparison_rows, mean_stats
from coexsim.models.wifi import estimate_mac_efficiency
from coexsim.output import (
    COMPARISON_FILENAME,
    MANIFEST_FILENAME,
    RunManifest,
    per_ue_filename,
    stats_filename,
    write_comparison,
    write_manifest,
    write_per_ue,
    write_stats,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage().strip()}")


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", "-c", type=Path, default=None, help="TOML config file (default: built-in defaults)")
    common.add_argument("--seed", type=int, default=None, help="Master seed (default: the config's seed)")
    common.add_argument("--verbose", "-v", action="count", default=0, help="-v for progress, -vv for retraining detail")

    parser = _Parser(prog="coexsim", description="LTE-U and WiFi coexistence simulator")
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    run_parser = subparsers.add_parser("run", parents=[common], help="Run one or all scheduling modes")
    run_parser.add_argument(
        "--mode", "-m",
        choices=[m.value for m in Mode] + ["all"],
        default="all",
        help="Scheduling mode to run (default: all)",
    )
    run_parser.add_argument("--out", "-o", type=Path, default=Path("results"), help="Output directory (default: results)")
    run_parser.add_argument("--seeds", type=_positive_int, default=1, help="Number of consecutive seeds to sweep (default: 1)")
    run_parser.add_argument("--workers", type=_positive_int, default=1, help="Runs executed concurrently (default: 1)")

    calibrate_parser = subparsers.add_parser(
        "calibrate", parents=[common], help="Measure the WiFi MAC efficiency used by the joint optimizer"
    )
    calibrate_parser.add_argument("--stations", "-n", type=_positive_int, default=10, help="Contending stations (default: 10)")
    calibrate_parser.add_argument("--duration", type=float, default=10.0, help="Simulated seconds (default: 10)")

    subparsers.add_parser("version", help="Show version information")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger("coexsim").setLevel(level)


def _load_config(args) -> SimConfig:
    config = parse_config(args.config) if args.config else SimConfig()
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config


def _run(args) -> int:
    config = _load_config(args)
    seeds = [config.seed + i for i in range(args.seeds)]
    modes = list(Mode) if args.mode == "all" else [Mode(args.mode)]
    jobs = [(mode, seed) for seed in seeds for mode in modes]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    files = []
    for mode, seed in jobs:
        files += [per_ue_filename(mode.value, seed), stats_filename(mode.value, seed)]
    if args.mode == "all":
        files.append(COMPARISON_FILENAME)
    manifest = RunManifest(
        config_digest=config_digest(config),
        seed=config.seed,
        seeds=seeds,
        modes=[m.value for m in modes],
        output_dir=str(out),
        tool_version=__version__,
        files=files,
    )
    write_manifest(out / MANIFEST_FILENAME, manifest)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        reports = list(pool.map(lambda job: run(replace(config, seed=job[1]), job[0]), jobs))

    for report in reports:
        write_per_ue(out / per_ue_filename(report.mode.value, report.seed), report)
        write_stats(out / stats_filename(report.mode.value, report.seed), report)

    if args.mode == "all":
        by_mode = {
            mode.value: mean_stats([r.stats for r in reports if r.mode is mode])
            for mode in modes
        }
        write_comparison(out / COMPARISON_FILENAME, comparison_rows(by_mode))

    logger.info("wrote %d files to %s", len(files) + 1, out)
    return 0


def _calibrate(args) -> int:
    config = _load_config(args)
    if args.duration <= 0:
        raise UsageError(f"argument --duration: must be positive, got {args.duration}")
    rng = np.random.default_rng(config.seed)
    phy_rates = [config.wifi.phy_rate] * args.stations
    efficiency = estimate_mac_efficiency(config.wifi, phy_rates, args.duration, rng)
    print(f"mac_efficiency = {efficiency:.4f}")
    return 0


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _configure_logging(getattr(args, "verbose", 0))

        if args.command == "run":
            return _run(args)
        if args.command == "calibrate":
            return _calibrate(args)
        if args.command == "version":
            print(f"coexsim {__version__}")
            print(f"Python {sys.version}")
            return 0
        parser.print_help()
        return 1
    except (UsageError, ConfigError) as e:
        print(f"coexsim: error: {e}", file=sys.stderr)
        return 1
    except (CoexsimError, OSError) as e:
        print(f"coexsim: error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
