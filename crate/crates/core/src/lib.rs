//! Tight-frame sensing matrix design for compressive sensing with
//! overcomplete dictionaries.
//!
//! The measurement model is `y = ΦΨx + n`: a sparse representation `x`
//! is synthesised through a dictionary `Ψ`, projected by a sensing matrix
//! `Φ` and corrupted by white Gaussian noise. The [`design`] module builds
//! `Φ` so that the equivalent matrix `ΦΨ` is (close to) a Parseval tight
//! frame under the sensing cost `‖Φ‖²_F = n`; [`metrics`] and [`recovery`]
//! evaluate the result and [`bench`] runs the Monte Carlo sweeps.
//!
//! Everything is generic over the element type through [`Real`]; the
//! `*64`/`*32` aliases below fix the common choices.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod design;
pub mod error;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod recovery;
pub mod rng;
pub mod scalar;

pub use design::{
    design_gaussian, design_tf1, design_tf2, gen_parseval_target, normalize_sensing,
    tightness_objective, DesignMethod, DictionaryModes, LeftFactor, ParsevalTarget,
};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, Vector};
pub use model::{
    canonical_dictionary, gen_gaussian_dictionary, gen_sparse_signal, gen_specified_dictionary,
    measure, Dictionary, NoiseModel, SensingMatrix, SignalModel, SparseSignal, SpikeKind,
};
pub use recovery::{bpdn, omp, oracle_ls, BpdnParams, RecoveryResult};
pub use rng::RandomStream;
pub use scalar::Real;

pub type Matrix64 = DenseMatrix<f64>;
pub type Matrix32 = DenseMatrix<f32>;
pub type Vector64 = Vector<f64>;
pub type Dictionary64 = Dictionary<f64>;
pub type Dictionary32 = Dictionary<f32>;
pub type SensingMatrix64 = SensingMatrix<f64>;
pub type SensingMatrix32 = SensingMatrix<f32>;
pub type SparseSignal64 = SparseSignal<f64>;
pub type ParsevalTarget64 = ParsevalTarget<f64>;
pub type DesignMethod64 = DesignMethod<f64>;
pub type RecoveryResult64 = RecoveryResult<f64>;
