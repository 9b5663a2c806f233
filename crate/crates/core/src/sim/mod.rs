//! Monte Carlo link simulation: SNR sweeps over the full transmit/receive
//! chain, the on/off desynchronization experiment, and CSV/SVG export.

mod config;
mod desync;
mod output;
mod sweep;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{ChannelKind, Decision, SimConfig, SimScheme};
pub use desync::{
    desync_experiment, flip_codeword, DesyncConfig, DesyncReport, DesyncTrial, Flip, FlipOutcome,
};
pub use output::{
    csv_string, emit_csv, emit_plot, parse_csv, svg_string, theory_csv_string, PlotSeries,
    SeriesStyle, CSV_HEADER,
};
pub use sweep::{run_sweep, trial_rng, PointResult, SweepResult};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed csv: {0}")]
    Csv(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Mapping(#[from] crate::mapping::MappingError),
    #[error(transparent)]
    Phy(#[from] crate::ofdm::PhyError),
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
    #[error(transparent)]
    Detection(#[from] crate::detection::DetectionError),
}
