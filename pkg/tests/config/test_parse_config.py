import math

import pytest

from coexsim.config import DEFAULT_CONFIG_PATH, SimConfig, config_digest, parse_config
from coexsim.errors import ConfigError


def _error_key(config_factory, text):
    with pytest.raises(ConfigError) as exc:
        parse_config(config_factory.write(text))
    return exc.value.key


class TestParseConfig:
    def test_empty_file_gives_defaults(self, config_factory):
        assert parse_config(config_factory.write("")) == SimConfig()

    def test_shipped_defaults_match_code(self):
        assert parse_config(DEFAULT_CONFIG_PATH) == SimConfig()

    def test_overrides(self, config_factory):
        config = parse_config(config_factory.write("n_dual = 7\nr_min = 300000\n[wifi]\ncw_min = 32\n"))
        assert config.n_dual == 7
        assert config.r_min == 300000.0
        assert isinstance(config.r_min, float)
        assert config.wifi.cw_min == 32
        assert config.channel == SimConfig().channel

    def test_count_max_inf(self, config_factory):
        assert parse_config(config_factory.write("count_max = inf\n")).count_max == math.inf
        assert parse_config(config_factory.write('count_max = "inf"\n')).count_max == math.inf

    def test_counting_mode(self, config_factory):
        assert parse_config(config_factory.write('counting = "cumulative"\n')).counting == "cumulative"


class TestParseConfigErrors:
    def test_missing_file(self, temp_dir):
        with pytest.raises(ConfigError) as exc:
            parse_config(temp_dir / "nope.toml")
        assert exc.value.key == "<file>"
        assert "not found" in str(exc.value)

    def test_malformed(self, config_factory):
        assert _error_key(config_factory, "k_lte_only = = 3\n") == "<file>"

    def test_negative_count(self, config_factory):
        assert _error_key(config_factory, "k_lte_only = -1\n") == "k_lte_only"

    def test_empty_population(self, config_factory):
        assert _error_key(config_factory, "k_lte_only = 0\nm_wifi_only = 0\nn_dual = 0\n") == "k_lte_only"

    def test_unknown_key(self, config_factory):
        assert _error_key(config_factory, "k_lte = 3\n") == "k_lte"

    def test_unknown_nested_key(self, config_factory):
        assert _error_key(config_factory, "[wifi]\ncw = 3\n") == "wifi.cw"

    def test_wrong_type(self, config_factory):
        assert _error_key(config_factory, 'num_rbs = "many"\n') == "num_rbs"

    def test_bool_is_not_a_count(self, config_factory):
        assert _error_key(config_factory, "num_rbs = true\n") == "num_rbs"

    def test_float_is_not_a_count(self, config_factory):
        assert _error_key(config_factory, "window_ttis = 1.5\n") == "window_ttis"

    def test_table_expected(self, config_factory):
        assert _error_key(config_factory, "channel = 3\n") == "channel"

    def test_cw_not_power_of_two(self, config_factory):
        assert _error_key(config_factory, "[wifi]\ncw_min = 24\n") == "wifi.cw_min"

    def test_pathloss_exponent(self, config_factory):
        assert _error_key(config_factory, "[channel]\npathloss_exponent = 1.5\n") == "channel.pathloss_exponent"

    def test_rts_collision_overhead(self, config_factory):
        text = "[wifi]\ncollision_overhead = 0.001\nsuccess_overhead = 0.0002\n"
        assert _error_key(config_factory, text) == "wifi.collision_overhead"

    def test_count_max_zero(self, config_factory):
        assert _error_key(config_factory, "count_max = 0\n") == "count_max"

    def test_bad_counting(self, config_factory):
        assert _error_key(config_factory, 'counting = "sometimes"\n') == "counting"

    def test_message_names_key(self, config_factory):
        with pytest.raises(ConfigError, match="mac_efficiency"):
            parse_config(config_factory.write("mac_efficiency = 1.5\n"))


class TestConfigDigest:
    def test_stable(self):
        assert config_digest(SimConfig()) == config_digest(SimConfig())

    def test_changes_with_config(self):
        assert config_digest(SimConfig()) != config_digest(SimConfig(seed=2))

    def test_handles_infinite_count_max(self):
        assert config_digest(SimConfig(count_max=math.inf)) != config_digest(SimConfig())
