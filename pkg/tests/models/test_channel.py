import math

import numpy as np
import pytest

from coexsim.errors import DomainError
from coexsim.models.channel import ChannelParams, Interface, draw_fading, snr_db, snr_to_rate

FLAT = ChannelParams(fading_enabled=False)


class TestSnrDb:
    def test_one_meter(self):
        assert snr_db(FLAT, 1.0, Interface.LTE) == pytest.approx(79.0)

    def test_hundred_meters(self):
        assert snr_db(FLAT, 100.0, Interface.LTE) == pytest.approx(9.0)

    def test_wifi_uses_its_own_power(self):
        assert snr_db(FLAT, 1.0, Interface.WIFI) == pytest.approx(14 - 40 + 96)

    def test_unit_fading_matches_disabled(self):
        faded = ChannelParams(fading_enabled=True)
        assert snr_db(faded, 37.0, Interface.LTE, 1.0) == snr_db(FLAT, 37.0, Interface.LTE)

    def test_fading_ignored_when_disabled(self):
        assert snr_db(FLAT, 50.0, Interface.LTE, 10.0) == snr_db(FLAT, 50.0, Interface.LTE)

    def test_fading_adds_db(self):
        faded = ChannelParams(fading_enabled=True)
        assert snr_db(faded, 50.0, Interface.LTE, 10.0) == pytest.approx(snr_db(FLAT, 50.0, Interface.LTE) + 10)

    @pytest.mark.parametrize("distance", [0.0, -5.0])
    def test_rejects_non_positive_distance(self, distance):
        with pytest.raises(DomainError):
            snr_db(FLAT, distance, Interface.LTE)

    def test_rejects_zero_fading_draw(self):
        with pytest.raises(DomainError):
            snr_db(ChannelParams(), 10.0, Interface.LTE, 0.0)

    def test_vectorized(self):
        out = snr_db(FLAT, np.array([1.0, 100.0]), Interface.LTE)
        np.testing.assert_allclose(out, [79.0, 9.0])

    def test_deterministic(self):
        assert snr_db(FLAT, 123.4, Interface.LTE) == snr_db(FLAT, 123.4, Interface.LTE)


class TestSnrToRate:
    def test_zero_db(self):
        assert snr_to_rate(0.0, 1e6, 1.0) == pytest.approx(1e6)

    def test_very_negative_snr(self):
        assert snr_to_rate(-200.0, 20e6, 1.0) < 1.0

    def test_fifteen_db(self):
        assert snr_to_rate(15.0, 1e6, 1.0) == pytest.approx(1e6 * math.log2(1 + 10**1.5))
        assert snr_to_rate(15.0, 1e6, 1.0) == pytest.approx(5.03e6, rel=1e-2)

    def test_efficiency_scales(self):
        assert snr_to_rate(10.0, 1e6, 0.5) == pytest.approx(0.5 * snr_to_rate(10.0, 1e6, 1.0))

    def test_rejects_zero_bandwidth(self):
        with pytest.raises(DomainError):
            snr_to_rate(10.0, 0.0, 1.0)

    def test_monotone_in_snr(self):
        rates = snr_to_rate(np.linspace(-30, 60, 500), 1e6, 0.75)
        assert np.all(np.diff(rates) >= 0)

    def test_linear_in_bandwidth(self):
        snrs = np.linspace(-10, 40, 50)
        np.testing.assert_allclose(snr_to_rate(snrs, 2e6, 0.75), 2 * snr_to_rate(snrs, 1e6, 0.75))

    def test_cap(self):
        rates = snr_to_rate(np.linspace(-10, 80, 200), 18e6, 0.75, max_rate=10e6)
        assert rates.max() <= 10e6
        assert rates.max() == 10e6


class TestDrawFading:
    def test_shape_and_positive(self, rng):
        draws = draw_fading(rng, 7)
        assert draws.shape == (7, 2)
        assert np.all(draws > 0)

    def test_unit_mean(self, rng):
        assert draw_fading(rng, 50_000).mean() == pytest.approx(1.0, abs=0.02)

    def test_deterministic(self):
        a = draw_fading(np.random.default_rng(5), 10)
        b = draw_fading(np.random.default_rng(5), 10)
        np.testing.assert_array_equal(a, b)
