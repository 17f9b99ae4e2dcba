//! Deterministic Monte Carlo sweeps and their CSV output.
//!
//! Every random object in a sweep is drawn from its own [`RandomStream`]
//! keyed by `(base_seed, cell, trial, purpose)`, so results do not depend
//! on how trials are scheduled across threads. Signal and noise streams
//! are shared by all designs of a cell, which pairs the designs trial by
//! trial.
//!
//! [`RandomStream`]: crate::rng::RandomStream

mod config;
mod output;
mod runs;

pub use config::{BpdnSettings, DesignSpec, DictionaryKind, Estimator, ExperimentConfig, ExperimentKind};
pub use output::{
    format_decimal, read_csv, read_csv_str, to_csv_string, write_csv, write_histogram_csv, CSV_HEADER,
    HISTOGRAM_HEADER,
};
pub use runs::{
    paired_ratio, run, run_detailed, run_dimension_ratio, run_energy_sweep, run_histogram, run_oracle_sweep,
    run_recovery_sweep, stream_id, HistogramSeries, RatioEstimate, SweepDetail, SweepOutput, SweepResult,
    SweepRow, TrialSeries, NO_ESTIMATOR, PURPOSE_DESIGN, PURPOSE_DICT, PURPOSE_NOISE, PURPOSE_SIGNAL,
    PURPOSE_TARGET, SWEEP_CELL,
};
