import hashlib
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import orjson

from coexsim.errors import ConfigError
from coexsim.models.channel import ChannelParams
from coexsim.models.wifi import WifiParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PACKAGE_DIR = Path(__file__).parent
CONFIGS_DIR = PACKAGE_DIR / "configs"
if not CONFIGS_DIR.exists():
    PROJECT_ROOT = PACKAGE_DIR.parent.parent
    CONFIGS_DIR = PROJECT_ROOT / "configs"

DEFAULT_CONFIG_PATH = CONFIGS_DIR / "default.toml"

COUNTING_MODES = ("consecutive", "cumulative")
PLACEMENTS = ("uniform-disk",)


@dataclass(frozen=True)
class SimConfig:
    k_lte_only: int = 50
    m_wifi_only: int = 4
    n_dual: int = 46
    num_rbs: int = 100
    rb_bandwidth: float = 180e3
    tti: float = 1e-3
    window_ttis: int = 100
    total_windows: int = 100
    r_min: float = 0.15e6
    count_max: int | float = 5
    counting: str = "consecutive"
    tau: float = 100.0
    epsilon: float = 1.0
    lte_cap: float = 1.5e6
    wifi_cap: float = 0.72e6
    lte_peak_rate: float = 55e6
    mac_efficiency: float = 0.55
    seed: int = 1
    placement: str = "uniform-disk"
    channel: ChannelParams = field(default_factory=ChannelParams)
    wifi: WifiParams = field(default_factory=WifiParams)

    @property
    def num_ues(self) -> int:
        return self.k_lte_only + self.m_wifi_only + self.n_dual

    @property
    def lte_bandwidth(self) -> float:
        return self.num_rbs * self.rb_bandwidth

    @property
    def window_duration(self) -> float:
        return self.tti * self.window_ttis

    @property
    def total_time(self) -> float:
        return self.window_duration * self.total_windows


_NESTED = {"channel": ChannelParams, "wifi": WifiParams}


def _coerce(key: str, value, default):
    name = key.rsplit(".", 1)[-1]
    if name == "count_max":
        if isinstance(value, str) and value.lower() in ("inf", "infinity"):
            return math.inf
        if isinstance(value, float) and math.isinf(value) and value > 0:
            return math.inf
        if isinstance(value, int) and not isinstance(value, bool):
            return value
        raise ConfigError(key, f"expected an integer or inf, got {value!r}")

    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(key, f"expected true or false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(key, f"expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(key, f"expected a string, got {value!r}")
    return value


def _apply(base, raw: dict, prefix: str = ""):
    names = {f.name for f in fields(base)}
    updates = {}
    for key, value in raw.items():
        dotted = f"{prefix}{key}"
        if key not in names:
            raise ConfigError(dotted, "unknown key")
        if key in _NESTED and not prefix:
            if not isinstance(value, dict):
                raise ConfigError(dotted, "expected a table")
            updates[key] = _apply(getattr(base, key), value, prefix=f"{key}.")
        else:
            updates[key] = _coerce(dotted, value, getattr(base, key))
    return replace(base, **updates)


def config_from_dict(raw: dict, base: SimConfig | None = None) -> SimConfig:
    config = _apply(base or SimConfig(), raw)
    validate_config(config)
    return config


def parse_config(path: str | Path) -> SimConfig:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError("<file>", f"config file not found: {path}") from None
    except OSError as e:
        raise ConfigError("<file>", f"cannot read {path}: {e.strerror or e}") from None
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as e:
        raise ConfigError("<file>", f"malformed TOML in {path}: {e}") from None
    return config_from_dict(raw)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _require(ok: bool, key: str, message: str) -> None:
    if not ok:
        raise ConfigError(key, message)


def validate_config(config: SimConfig) -> None:
    for key in ("k_lte_only", "m_wifi_only", "n_dual"):
        _require(getattr(config, key) >= 0, key, "must be non-negative")
    _require(config.num_ues >= 1, "k_lte_only", "k_lte_only + m_wifi_only + n_dual must be at least 1")
    _require(config.num_rbs >= 1, "num_rbs", "must be at least 1")
    _require(config.window_ttis >= 1, "window_ttis", "must be at least 1")
    _require(config.total_windows >= 0, "total_windows", "must be non-negative")
    for key in ("rb_bandwidth", "tti", "r_min", "epsilon", "lte_cap", "wifi_cap", "lte_peak_rate"):
        _require(getattr(config, key) > 0, key, "must be positive")
    _require(config.tau >= 1, "tau", "must be at least 1")
    _require(0 < config.mac_efficiency <= 1, "mac_efficiency", "must be in (0, 1]")
    _require(
        config.count_max >= 1 and (math.isinf(config.count_max) or float(config.count_max).is_integer()),
        "count_max",
        "must be an integer of at least 1, or inf",
    )
    _require(config.counting in COUNTING_MODES, "counting", f"must be one of {', '.join(COUNTING_MODES)}")
    _require(config.placement in PLACEMENTS, "placement", f"must be one of {', '.join(PLACEMENTS)}")

    channel = config.channel
    _require(channel.cell_radius > 0, "channel.cell_radius", "must be positive")
    _require(channel.pathloss_exponent >= 2, "channel.pathloss_exponent", "must be at least 2")
    _require(0 < channel.efficiency <= 1, "channel.efficiency", "must be in (0, 1]")
    _require(channel.fading_block_len >= 1, "channel.fading_block_len", "must be at least 1")

    wifi = config.wifi
    _require(wifi.slot_time > 0, "wifi.slot_time", "must be positive")
    _require(_is_power_of_two(wifi.cw_min), "wifi.cw_min", "must be a power of two")
    _require(
        _is_power_of_two(wifi.cw_max) and wifi.cw_max >= wifi.cw_min,
        "wifi.cw_max",
        "must be a power of two no smaller than cw_min",
    )
    _require(wifi.max_stage >= 0, "wifi.max_stage", "must be non-negative")
    _require(wifi.payload_bits >= 1, "wifi.payload_bits", "must be at least 1")
    _require(wifi.success_overhead >= 0, "wifi.success_overhead", "must be non-negative")
    _require(wifi.collision_overhead >= 0, "wifi.collision_overhead", "must be non-negative")
    _require(
        not wifi.rts_enabled or wifi.collision_overhead <= wifi.success_overhead,
        "wifi.collision_overhead",
        "must not exceed success_overhead when rts_enabled",
    )
    _require(wifi.phy_rate > 0, "wifi.phy_rate", "must be positive")
    _require(wifi.bandwidth > 0, "wifi.bandwidth", "must be positive")
    _require(0 <= wifi.min_phy_rate <= wifi.phy_rate, "wifi.min_phy_rate", "must be between 0 and phy_rate")


def config_as_dict(config: SimConfig) -> dict:
    data = asdict(config)
    if math.isinf(data["count_max"]):
        data["count_max"] = "inf"
    return data


def config_digest(config: SimConfig) -> str:
    return hashlib.sha256(orjson.dumps(config_as_dict(config), option=orjson.OPT_SORT_KEYS)).hexdigest()
