"""Monte Carlo validation of the coverage analysis."""

from .config import SimConfig, SimEstimate, SimMode, default_window, preset_config
from .monte_carlo import measure_policy_fraction, policy_fraction_stderr, simulate_coverage, simulate_sinr_once
from .rng import block_generator, realization_generator

__all__ = [
    "SimConfig",
    "SimEstimate",
    "SimMode",
    "block_generator",
    "default_window",
    "measure_policy_fraction",
    "preset_config",
    "policy_fraction_stderr",
    "realization_generator",
    "simulate_coverage",
    "simulate_sinr_once",
]
