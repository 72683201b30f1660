import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import pytest

from coexsim.config import SimConfig

SMALL_TOML = """\
k_lte_only = 3
m_wifi_only = 3
n_dual = 4
num_rbs = 10
window_ttis = 20
total_windows = 10
"""


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def temp_dir():
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@dataclass
class ConfigFactory:
    base_dir: Path
    base: SimConfig = field(
        default_factory=lambda: SimConfig(
            k_lte_only=3, m_wifi_only=3, n_dual=4, num_rbs=10, window_ttis=20, total_windows=10
        )
    )
    _counter: int = field(default=0, repr=False)

    def create(self, channel: dict | None = None, wifi: dict | None = None, **overrides) -> SimConfig:
        return replace(
            self.base,
            channel=replace(self.base.channel, **(channel or {})),
            wifi=replace(self.base.wifi, **(wifi or {})),
            **overrides,
        )

    def write(self, text: str = SMALL_TOML, name: str | None = None) -> Path:
        if name is None:
            self._counter += 1
            name = f"config{self._counter}.toml"
        path = self.base_dir / name
        path.write_text(text)
        return path


@pytest.fixture
def config_factory(temp_dir):
    return ConfigFactory(base_dir=temp_dir)
