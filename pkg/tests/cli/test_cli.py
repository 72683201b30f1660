import csv

import orjson
import pytest

from coexsim import __version__
from coexsim.cli import run_cli
from coexsim.config import SimConfig
from coexsim.output import COMPARISON_HEADER


def _read(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestRun:
    @pytest.mark.parametrize("mode", ["lte", "wifi", "joint"])
    def test_deterministic_csvs(self, config_factory, temp_dir, mode):
        config = config_factory.write()
        for out in ("a", "b"):
            assert run_cli(["run", "--config", str(config), "--mode", mode, "--seed", "7", "--out", str(temp_dir / out)]) == 0
        for name in (f"per_ue_{mode}_7.csv", f"stats_{mode}_7.csv"):
            assert (temp_dir / "a" / name).read_bytes() == (temp_dir / "b" / name).read_bytes()

    @pytest.mark.parametrize("mode", ["lte", "wifi", "joint"])
    def test_single_mode_outputs(self, config_factory, temp_dir, mode):
        out = temp_dir / "out"
        assert run_cli(["run", "-c", str(config_factory.write()), "-m", mode, "-o", str(out)]) == 0
        assert (out / f"per_ue_{mode}_1.csv").exists()
        assert (out / f"stats_{mode}_1.csv").exists()
        assert not (out / "comparison.csv").exists()

    def test_all_modes_comparison(self, config_factory, temp_dir):
        out = temp_dir / "out"
        assert run_cli(["run", "-c", str(config_factory.write()), "-o", str(out)]) == 0

        with open(out / "comparison.csv", newline="") as f:
            header = next(csv.reader(f))
        assert tuple(header) == COMPARISON_HEADER
        rows = _read(out / "comparison.csv")
        assert [row["metric"] for row in rows][1] == "system_throughput_bps"
        system = rows[1]
        assert float(system["joint_over_lte"]) == pytest.approx(float(system["joint"]) / float(system["lte"]))

    def test_manifest_lists_files(self, config_factory, temp_dir):
        out = temp_dir / "out"
        run_cli(["run", "-c", str(config_factory.write()), "-o", str(out), "--seeds", "2"])
        manifest = orjson.loads((out / "manifest.json").read_bytes())
        assert manifest["seeds"] == [1, 2]
        assert manifest["modes"] == ["lte", "wifi", "joint"]
        assert manifest["tool_version"] == __version__
        assert len(manifest["config_digest"]) == 64
        for name in manifest["files"]:
            assert (out / name).exists()
        assert "comparison.csv" in manifest["files"]

    def test_seed_sweep_averages(self, config_factory, temp_dir):
        out = temp_dir / "out"
        assert run_cli(["run", "-c", str(config_factory.write()), "-o", str(out), "--seeds", "3", "--seed", "10", "--workers", "2"]) == 0

        stats_files = sorted(out.glob("stats_*.csv"))
        assert len(stats_files) == 9
        comparison = {row["metric"]: row for row in _read(out / "comparison.csv")}
        for mode in ("lte", "wifi", "joint"):
            values = [float(_read(out / f"stats_{mode}_{seed}.csv")[0]["system_throughput_bps"]) for seed in (10, 11, 12)]
            assert float(comparison["system_throughput_bps"][mode]) == pytest.approx(sum(values) / 3)

    def test_defaults_used_without_config(self, temp_dir, monkeypatch):
        tiny = SimConfig(k_lte_only=1, m_wifi_only=1, n_dual=1, num_rbs=5, window_ttis=5, total_windows=2)
        monkeypatch.setattr("coexsim.cli.SimConfig", lambda: tiny)
        assert run_cli(["run", "-m", "lte", "-o", str(temp_dir)]) == 0
        assert (temp_dir / "stats_lte_1.csv").exists()


class TestExitCodes:
    def test_unknown_flag(self, capsys):
        assert run_cli(["run", "--bogus"]) == 1
        assert "coexsim: error" in capsys.readouterr().err

    def test_bad_mode(self):
        assert run_cli(["run", "--mode", "bluetooth"]) == 1

    def test_bad_seeds(self):
        assert run_cli(["run", "--seeds", "0"]) == 1

    def test_no_command(self, capsys):
        assert run_cli([]) == 1

    def test_config_error_names_key(self, config_factory, temp_dir, capsys):
        config = config_factory.write("k_lte_only = -1\n")
        assert run_cli(["run", "-c", str(config), "-o", str(temp_dir / "out")]) == 1
        assert "k_lte_only" in capsys.readouterr().err
        assert not (temp_dir / "out").exists()

    def test_missing_config(self, temp_dir, capsys):
        assert run_cli(["run", "-c", str(temp_dir / "missing.toml"), "-o", str(temp_dir / "out")]) == 1
        assert "not found" in capsys.readouterr().err

    def test_runtime_error_leaves_no_comparison(self, config_factory, temp_dir):
        config = config_factory.write("total_windows = 0\n")
        out = temp_dir / "out"
        assert run_cli(["run", "-c", str(config), "-o", str(out)]) == 2
        assert (out / "manifest.json").exists()
        assert not (out / "comparison.csv").exists()

    def test_unwritable_output(self, config_factory, temp_dir):
        blocker = temp_dir / "file"
        blocker.write_text("")
        assert run_cli(["run", "-c", str(config_factory.write()), "-o", str(blocker / "out")]) == 2


class TestOtherCommands:
    def test_version(self, capsys):
        assert run_cli(["version"]) == 0
        assert f"coexsim {__version__}" in capsys.readouterr().out

    def test_calibrate(self, capsys):
        assert run_cli(["calibrate", "--stations", "4", "--duration", "0.5"]) == 0
        line = capsys.readouterr().out.strip()
        assert line.startswith("mac_efficiency = ")
        assert 0 < float(line.split("=")[1]) < 1

    def test_calibrate_rejects_bad_duration(self):
        assert run_cli(["calibrate", "--duration", "0"]) == 1
