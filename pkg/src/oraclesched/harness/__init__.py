"""Experiment harness: loads, metrics, CSV/SVG output and configuration."""
from .csvio import read_aggregate, read_runs, write_csv
from .experiment import (
    Aggregate,
    ConfigError,
    ExperimentConfig,
    ExperimentResult,
    aggregate,
    parse_topology,
    run_experiment,
    stream,
)
from .load import LoadSpec, audit, capacity_scale, make_grid_load, make_switch_load
from .metrics import MetricsLog, MetricsRecorder, drift_ratio, is_stable, monotone_growth
from .plot import render_plot
