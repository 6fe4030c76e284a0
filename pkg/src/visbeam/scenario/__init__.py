"""Configuration, experiment drivers and result files for the beam-management study."""

from .config import SCHEMES, ConfigError, ScenarioConfig, config_from_mapping, load_config
from .engine import DropEvaluator, DropResult, bs_view, resolve_profile, ue_view
from .experiments import (DropSet, LatencyRow, NmseRow, RateMap, grid_axes, irs_geometry,
                          random_positions, run_drops, run_irs_nmse, run_latency_sweep,
                          run_rate_map)
from .outputs import emit_outputs, write_csv, write_manifest

__all__ = [
    "SCHEMES", "ConfigError", "ScenarioConfig", "config_from_mapping", "load_config",
    "DropEvaluator", "DropResult", "bs_view", "ue_view", "resolve_profile",
    "DropSet", "LatencyRow", "NmseRow", "RateMap", "grid_axes", "irs_geometry",
    "random_positions", "run_drops", "run_irs_nmse", "run_latency_sweep", "run_rate_map",
    "emit_outputs", "write_csv", "write_manifest",
]
