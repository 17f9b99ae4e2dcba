//! Frame-quality and estimation-quality metrics.

mod coherence;
pub(crate) mod oracle;
mod ric;
mod strip;

pub use coherence::{
    coherence_report, gram, mutual_coherence, offdiag_histogram, sensed_energy, sensed_snr,
    CoherenceReport, Histogram,
};
pub use oracle::{oracle_mse_expected, oracle_mse_support, OracleEstimate, SupportAveraging};
pub use ric::{bpdn_error_constants, exact_ric, RicReport};
pub use strip::{empirical_strip, rsnr, rsnr_db, strip_bound, StripBound, StripEstimate};
