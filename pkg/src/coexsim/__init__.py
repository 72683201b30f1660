__version__ = "0.1.0"

from coexsim.config import SimConfig, parse_config
from coexsim.engine import Mode, SimReport, run
from coexsim.metrics import SchedulerStats, compute_stats

__all__ = ["__version__", "SimConfig", "parse_config", "Mode", "SimReport", "run", "SchedulerStats", "compute_stats"]
