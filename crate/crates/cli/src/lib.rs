//! Configuration files, parameter sweeps and data output for the `chainbath`
//! command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod sweep;

pub use config::{load_config, parse_config, Preset, Profile, SweepConfig};
pub use error::{CliError, Result};
pub use sweep::{
    phase_diagram_with, run_distance_scan, run_phase_diagram, run_time_series, time_series_with,
    CellStats, DistanceScan, Engine, PhaseDiagram, RunMetadata, SeriesRow, TimeSeries,
};
