use rayon::prelude::*;

use super::config::{
    CellDims, DesignSpec, DictionaryKind, Estimator, ExperimentConfig, ExperimentKind, DEFAULT_BINS,
};
use crate::design::{
    design_tf1, design_tf2_from_modes, gaussian_design_with, parseval_target_with, DictionaryModes,
    ParsevalTarget,
};
use crate::error::{Error, Result};
use crate::linalg::{frobenius_sq, DenseMatrix};
use crate::metrics::oracle::mean_stderr;
use crate::metrics::{gram, offdiag_histogram, oracle_mse_support};
use crate::model::{
    apply_sparse, canonical_dictionary, gaussian_dictionary_with, specified_dictionary_with, Dictionary,
    NoiseModel, SensingMatrix, SignalModel,
};
use crate::recovery::{bpdn, omp, oracle_ls, BpdnParams};
use crate::rng::RandomStream;

/// Estimator column value for rows that carry no MSE.
pub const NO_ESTIMATOR: &str = "none";

/// Cell coordinate reserved for objects shared by a whole sweep.
pub const SWEEP_CELL: u64 = (1 << 24) - 1;

pub const PURPOSE_DICT: u64 = 0;
pub const PURPOSE_SIGNAL: u64 = 1;
pub const PURPOSE_NOISE: u64 = 2;
pub const PURPOSE_TARGET: u64 = 3;
/// Design `k` of a config draws from purpose `PURPOSE_DESIGN + k`.
pub const PURPOSE_DESIGN: u64 = 16;

/// Stream id `cell << 40 | trial << 8 | purpose`.
pub fn stream_id(cell: u64, trial: u64, purpose: u64) -> u64 {
    debug_assert!(cell < 1 << 24 && trial < 1 << 32 && purpose < 1 << 8);
    (cell << 40) | (trial << 8) | purpose
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub experiment: String,
    pub design: String,
    pub dictionary_kind: String,
    pub estimator: String,
    pub s: usize,
    pub m: usize,
    pub n: usize,
    pub nhat: usize,
    pub sigma2: f64,
    pub trials: usize,
    pub mse_mean: f64,
    pub mse_stderr: f64,
    pub sensed_energy_mean: f64,
    pub singular_trials: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// Off-diagonal coherence histogram of one design.
#[derive(Clone, Debug, PartialEq)]
pub struct HistogramSeries {
    pub design: String,
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Per-trial record behind one row. `losses[t]` is `None` when trial `t`
/// hit a singular restricted Gram; `energies[t]` is `‖ΦΨ‖²_F`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSeries {
    pub design: DesignSpec,
    pub estimator: Option<Estimator>,
    pub s: usize,
    pub m: usize,
    pub n: usize,
    pub nhat: usize,
    pub losses: Vec<Option<f64>>,
    pub energies: Vec<f64>,
}

impl TrialSeries {
    pub fn valid_losses(&self) -> Vec<f64> {
        self.losses.iter().flatten().copied().collect()
    }

    pub fn singular_trials(&self) -> usize {
        self.losses.iter().filter(|l| l.is_none()).count()
    }
}

/// Everything a sweep produced, before aggregation.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepDetail {
    pub config: ExperimentConfig,
    /// Ordered by cell, then design, then estimator.
    pub series: Vec<TrialSeries>,
    pub histograms: Vec<HistogramSeries>,
}

/// Aggregated output of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub result: SweepResult,
    pub histograms: Vec<HistogramSeries>,
}

/// Ratio of means `ā/b̄` over trials where both losses exist, with a
/// paired delta-method standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub stderr: f64,
    pub pairs: usize,
}

pub fn paired_ratio(a: &[Option<f64>], b: &[Option<f64>]) -> Option<RatioEstimate> {
    let pairs: Vec<(f64, f64)> = a
        .iter()
        .zip(b)
        .filter_map(|(x, y)| Some(((*x)?, (*y)?)))
        .collect();
    let k = pairs.len();
    if k == 0 {
        return None;
    }
    let kf = k as f64;
    let mean_a = pairs.iter().map(|p| p.0).sum::<f64>() / kf;
    let mean_b = pairs.iter().map(|p| p.1).sum::<f64>() / kf;
    if !(mean_b > 0.0) {
        return None;
    }
    let ratio = mean_a / mean_b;
    let stderr = if k < 2 {
        0.0
    } else {
        let ss: f64 = pairs.iter().map(|(x, y)| (x - ratio * y).powi(2)).sum();
        (ss / (kf * (kf - 1.0))).sqrt() / mean_b
    };
    Some(RatioEstimate { ratio, stderr, pairs: k })
}

fn make_dictionary(kind: DictionaryKind, n: usize, nhat: usize, stream: RandomStream) -> Result<Dictionary<f64>> {
    let mut rng = stream.rng();
    match kind {
        DictionaryKind::Gaussian => gaussian_dictionary_with(n, nhat, &mut rng),
        DictionaryKind::Canonical => canonical_dictionary(n),
        DictionaryKind::Specified { ratio } => specified_dictionary_with(n, nhat, ratio, &mut rng),
    }
}

/// Builds every configured design for `psi` from the streams of `(cell, trial)`.
fn build_designs(
    cfg: &ExperimentConfig,
    psi: &Dictionary<f64>,
    m: usize,
    cell: u64,
    trial: u64,
) -> Result<Vec<SensingMatrix<f64>>> {
    let stream = |purpose| RandomStream::new(cfg.base_seed, stream_id(cell, trial, purpose));
    let needs_modes = cfg.designs.iter().any(|d| matches!(d, DesignSpec::Tf2 { .. }));
    let needs_target = cfg.designs.iter().any(|d| matches!(d, DesignSpec::Tf1 { .. }));
    let modes = needs_modes.then(|| match cfg.dictionary_kind {
        DictionaryKind::Canonical => DictionaryModes::identity(psi.n()),
        _ => DictionaryModes::new(psi),
    });
    let target: Option<ParsevalTarget<f64>> = if needs_target {
        Some(parseval_target_with(m, psi.nhat(), &mut stream(PURPOSE_TARGET).rng())?)
    } else {
        None
    };
    cfg.designs
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let rs = stream(PURPOSE_DESIGN + k as u64);
            match d {
                DesignSpec::Gaussian => gaussian_design_with(m, psi.n(), &mut rs.rng()),
                DesignSpec::Tf1 { alpha } => design_tf1(psi, target.as_ref().expect("target built"), *alpha),
                DesignSpec::Tf2 { left_factor } => {
                    design_tf2_from_modes(modes.as_ref().expect("modes built"), m, *left_factor, rs)
                }
            }
        })
        .collect()
}

fn equivalents(phis: &[SensingMatrix<f64>], psi: &Dictionary<f64>) -> Result<Vec<DenseMatrix<f64>>> {
    phis.iter().map(|phi| phi.equivalent(psi)).collect()
}

fn singular_to_none<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Singular(_)) | Err(Error::Infeasible(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// How the oracle estimator's per-trial loss is obtained.
#[derive(Clone, Copy, PartialEq, Eq)]
enum OracleLoss {
    /// `‖x̂ − x‖²` of the least-squares fit on the noisy measurement.
    Empirical,
    /// `σ² Tr((A_JᵀA_J)⁻¹)`, the noise-averaged loss on the drawn support.
    Expected,
}

struct TrialOutcome {
    /// Design-major, estimator-minor.
    losses: Vec<Option<f64>>,
    energies: Vec<f64>,
}

/// Draws one signal and noise vector and scores every (design, estimator)
/// pair on them.
fn sparse_trial(
    cfg: &ExperimentConfig,
    dims: CellDims,
    cell: u64,
    trial: u64,
    mats: &[DenseMatrix<f64>],
    oracle_loss: OracleLoss,
) -> Result<TrialOutcome> {
    let stream = |purpose| RandomStream::new(cfg.base_seed, stream_id(cell, trial, purpose));
    let model = SignalModel::new(dims.nhat, dims.s, cfg.spike_kind)?;
    let x = model.sample::<f64, _>(&mut stream(PURPOSE_SIGNAL).rng());
    let noise = NoiseModel::new(cfg.sigma2)?.sample(dims.m, &mut stream(PURPOSE_NOISE).rng());
    let dense_x = x.to_dense();
    let settings = cfg.bpdn.unwrap_or_default();
    let mut params = BpdnParams::new(
        settings
            .epsilon
            .unwrap_or_else(|| BpdnParams::noise_budget(cfg.sigma2, dims.m)),
    );
    if let Some(v) = settings.max_iterations {
        params.max_iterations = v;
    }
    if let Some(v) = settings.tolerance {
        params.tolerance = v;
    }
    if let Some(v) = settings.penalty {
        params.penalty = v;
    }

    let mut losses = Vec::with_capacity(mats.len() * cfg.estimators.len());
    let mut energies = Vec::with_capacity(mats.len());
    for a in mats {
        energies.push(frobenius_sq(a));
        let y = apply_sparse(a, &x) + &noise;
        for est in &cfg.estimators {
            let loss = match (est, oracle_loss) {
                (Estimator::Oracle, OracleLoss::Expected) => {
                    singular_to_none(oracle_mse_support(a, x.support(), cfg.sigma2))?
                }
                (Estimator::Oracle, OracleLoss::Empirical) => {
                    singular_to_none(oracle_ls(a, &y, x.support()))?.map(|r| (r.estimate - &dense_x).norm_squared())
                }
                (Estimator::Omp, _) => {
                    singular_to_none(omp(a, &y, dims.s, 0.0))?.map(|r| (r.estimate - &dense_x).norm_squared())
                }
                (Estimator::Bpdn, _) => {
                    singular_to_none(bpdn(a, &y, &params))?.map(|r| (r.estimate - &dense_x).norm_squared())
                }
            };
            losses.push(loss);
        }
    }
    Ok(TrialOutcome { losses, energies })
}

/// Runs `f` for every trial in parallel and returns outcomes in trial
/// order; the first failing trial (by index) decides the error.
fn run_trials<F>(trials: usize, f: F) -> Result<Vec<TrialOutcome>>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync,
{
    let outcomes: Vec<Result<TrialOutcome>> = (0..trials as u64).into_par_iter().map(&f).collect();
    outcomes.into_iter().collect()
}

fn collect_series(
    cfg: &ExperimentConfig,
    dims: CellDims,
    outcomes: &[TrialOutcome],
    estimators: &[Option<Estimator>],
) -> Vec<TrialSeries> {
    let mut series = Vec::new();
    for (k, design) in cfg.designs.iter().enumerate() {
        for (e, est) in estimators.iter().enumerate() {
            let losses = match est {
                Some(_) => outcomes
                    .iter()
                    .map(|o| o.losses[k * estimators.len() + e])
                    .collect(),
                None => Vec::new(),
            };
            series.push(TrialSeries {
                design: *design,
                estimator: *est,
                s: dims.s,
                m: dims.m,
                n: dims.n,
                nhat: dims.nhat,
                losses,
                energies: outcomes.iter().map(|o| o.energies[k]).collect(),
            });
        }
    }
    series
}

fn sweep_stream(cfg: &ExperimentConfig, trial: u64, purpose: u64) -> RandomStream {
    RandomStream::new(cfg.base_seed, stream_id(SWEEP_CELL, trial, purpose))
}

/// Sweeps over a fixed dictionary; designs are drawn once per distinct `m`.
fn fixed_dictionary_sweep(cfg: &ExperimentConfig) -> Result<SweepDetail> {
    let cells = cfg.cells()?;
    let first = cells[0];
    let psi = make_dictionary(cfg.dictionary_kind, first.n, first.nhat, sweep_stream(cfg, 0, PURPOSE_DICT))?;
    let estimators: Vec<Option<Estimator>> = cfg.estimators.iter().map(|&e| Some(e)).collect();
    let mut series = Vec::new();
    let mut cached: Option<(usize, Vec<DenseMatrix<f64>>)> = None;
    for (c, dims) in cells.iter().enumerate() {
        if cached.as_ref().map(|(m, _)| *m) != Some(dims.m) {
            let phis = build_designs(cfg, &psi, dims.m, SWEEP_CELL, dims.m as u64)?;
            cached = Some((dims.m, equivalents(&phis, &psi)?));
        }
        let mats = &cached.as_ref().expect("designs cached").1;
        let outcomes = run_trials(cfg.trials, |t| {
            sparse_trial(cfg, *dims, c as u64, t, mats, OracleLoss::Empirical)
        })?;
        series.extend(collect_series(cfg, *dims, &outcomes, &estimators));
    }
    Ok(SweepDetail {
        config: cfg.clone(),
        series,
        histograms: Vec::new(),
    })
}

/// Sweeps over `n` with a fresh dictionary and fresh designs in every trial.
fn fresh_dictionary_sweep(cfg: &ExperimentConfig) -> Result<SweepDetail> {
    let with_signal = cfg.experiment == ExperimentKind::DimensionRatio;
    let estimators: Vec<Option<Estimator>> = if with_signal {
        cfg.estimators.iter().map(|&e| Some(e)).collect()
    } else {
        vec![None]
    };
    let mut series = Vec::new();
    for (c, dims) in cfg.cells()?.iter().enumerate() {
        let cell = c as u64;
        let outcomes = run_trials(cfg.trials, |t| {
            let dict_stream = RandomStream::new(cfg.base_seed, stream_id(cell, t, PURPOSE_DICT));
            let psi = make_dictionary(cfg.dictionary_kind, dims.n, dims.nhat, dict_stream)?;
            let phis = build_designs(cfg, &psi, dims.m, cell, t)?;
            let mats = equivalents(&phis, &psi)?;
            if with_signal {
                sparse_trial(cfg, *dims, cell, t, &mats, OracleLoss::Expected)
            } else {
                Ok(TrialOutcome {
                    losses: Vec::new(),
                    energies: mats.iter().map(frobenius_sq).collect(),
                })
            }
        })?;
        series.extend(collect_series(cfg, *dims, &outcomes, &estimators));
    }
    Ok(SweepDetail {
        config: cfg.clone(),
        series,
        histograms: Vec::new(),
    })
}

fn histogram_detail(cfg: &ExperimentConfig) -> Result<SweepDetail> {
    let dims = cfg.cells()?[0];
    let psi = make_dictionary(cfg.dictionary_kind, dims.n, dims.nhat, sweep_stream(cfg, 0, PURPOSE_DICT))?;
    let phis = build_designs(cfg, &psi, dims.m, SWEEP_CELL, dims.m as u64)?;
    let mats = equivalents(&phis, &psi)?;
    let bins = cfg.bins.unwrap_or(DEFAULT_BINS);
    let mut series = Vec::new();
    let mut histograms = Vec::new();
    for (design, a) in cfg.designs.iter().zip(&mats) {
        let h = offdiag_histogram(&gram(a), bins)?;
        histograms.push(HistogramSeries {
            design: design.label(),
            edges: h.edges,
            counts: h.counts,
        });
        series.push(TrialSeries {
            design: *design,
            estimator: None,
            s: dims.s,
            m: dims.m,
            n: dims.n,
            nhat: dims.nhat,
            losses: Vec::new(),
            energies: vec![frobenius_sq(a)],
        });
    }
    Ok(SweepDetail {
        config: cfg.clone(),
        series,
        histograms,
    })
}

/// Runs any experiment and keeps every per-trial value.
pub fn run_detailed(cfg: &ExperimentConfig) -> Result<SweepDetail> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::Histogram => histogram_detail(cfg),
        ExperimentKind::OracleSweep | ExperimentKind::RecoverySweep => fixed_dictionary_sweep(cfg),
        ExperimentKind::DimensionRatio | ExperimentKind::EnergySweep => fresh_dictionary_sweep(cfg),
    }
}

impl SweepDetail {
    fn row(&self, design: String, estimator: &str, dims: (usize, usize, usize, usize)) -> SweepRow {
        let cfg = &self.config;
        SweepRow {
            experiment: cfg.experiment.label().into(),
            design,
            dictionary_kind: cfg.dictionary_kind.label(),
            estimator: estimator.into(),
            s: dims.0,
            m: dims.1,
            n: dims.2,
            nhat: dims.3,
            sigma2: cfg.sigma2,
            trials: 0,
            mse_mean: 0.0,
            mse_stderr: 0.0,
            sensed_energy_mean: 0.0,
            singular_trials: 0,
            seed: cfg.base_seed,
        }
    }

    /// One row per series; dimension-ratio sweeps add a `<design>/gaussian`
    /// row per non-Gaussian design, estimator and `n`, whose MSE and
    /// energy columns hold ratios of means.
    pub fn summarize(&self) -> Result<SweepResult> {
        let mut rows = Vec::new();
        let per_cell = self.config.designs.len() * self.config.estimators.len().max(1);
        for chunk in self.series.chunks(per_cell) {
            for sr in chunk {
                let dims = (sr.s, sr.m, sr.n, sr.nhat);
                let label = sr.estimator.map_or(NO_ESTIMATOR, |e| e.label());
                let mut row = self.row(sr.design.label(), label, dims);
                row.trials = sr.energies.len();
                row.sensed_energy_mean = mean_stderr(&sr.energies).0;
                if sr.estimator.is_some() {
                    let valid = sr.valid_losses();
                    if valid.is_empty() {
                        return Err(Error::Singular(format!(
                            "every trial was singular for design {} at s={} m={} n={}",
                            sr.design.label(),
                            sr.s,
                            sr.m,
                            sr.n
                        )));
                    }
                    (row.mse_mean, row.mse_stderr) = mean_stderr(&valid);
                    row.singular_trials = sr.singular_trials();
                }
                rows.push(row);
            }
            if self.config.experiment == ExperimentKind::DimensionRatio {
                rows.extend(self.ratio_rows(chunk)?);
            }
        }
        Ok(SweepResult { rows })
    }

    fn ratio_rows(&self, chunk: &[TrialSeries]) -> Result<Vec<SweepRow>> {
        let mut rows = Vec::new();
        for est in &self.config.estimators {
            let find = |d: &DesignSpec| {
                chunk
                    .iter()
                    .find(|sr| sr.design == *d && sr.estimator == Some(*est))
                    .expect("series present")
            };
            let base = find(&DesignSpec::Gaussian);
            for d in self.config.designs.iter().filter(|d| **d != DesignSpec::Gaussian) {
                let num = find(d);
                let est_ratio = paired_ratio(&num.losses, &base.losses).ok_or_else(|| {
                    Error::Singular(format!("no usable trial pairs for {}/gaussian at n={}", d.label(), num.n))
                })?;
                let mut row = self.row(
                    format!("{}/gaussian", d.label()),
                    est.label(),
                    (num.s, num.m, num.n, num.nhat),
                );
                row.trials = num.losses.len();
                row.mse_mean = est_ratio.ratio;
                row.mse_stderr = est_ratio.stderr;
                row.sensed_energy_mean = mean_stderr(&num.energies).0 / mean_stderr(&base.energies).0;
                row.singular_trials = num.losses.len() - est_ratio.pairs;
                rows.push(row);
            }
        }
        Ok(rows)
    }
}

/// Runs any experiment and aggregates it into rows.
pub fn run(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    let detail = run_detailed(cfg)?;
    Ok(SweepOutput {
        result: detail.summarize()?,
        histograms: detail.histograms,
    })
}

fn expect_kind(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if cfg.experiment != kind {
        return Err(Error::Config(format!(
            "expected a {} config, got {}",
            kind.label(),
            cfg.experiment.label()
        )));
    }
    Ok(())
}

/// Coherence histograms and sensed energies of each design on one dictionary.
pub fn run_histogram(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    expect_kind(cfg, ExperimentKind::Histogram)?;
    run(cfg)
}

pub fn run_oracle_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    expect_kind(cfg, ExperimentKind::OracleSweep)?;
    Ok(run(cfg)?.result)
}

pub fn run_recovery_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    expect_kind(cfg, ExperimentKind::RecoverySweep)?;
    Ok(run(cfg)?.result)
}

pub fn run_dimension_ratio(cfg: &ExperimentConfig) -> Result<SweepResult> {
    expect_kind(cfg, ExperimentKind::DimensionRatio)?;
    Ok(run(cfg)?.result)
}

pub fn run_energy_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    expect_kind(cfg, ExperimentKind::EnergySweep)?;
    Ok(run(cfg)?.result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::output::to_csv_string;

    fn cfg(text: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(text).unwrap()
    }

    #[test]
    fn stream_ids_pack_without_overlap() {
        let a = stream_id(1, 0, 0);
        let b = stream_id(0, 1 << 31, 255);
        assert_ne!(a, b);
        assert_eq!(stream_id(SWEEP_CELL, 5, PURPOSE_NOISE) >> 40, SWEEP_CELL);
    }

    #[test]
    fn paired_ratio_matches_hand_computation() {
        let a = [Some(2.0), Some(4.0), None];
        let b = [Some(4.0), Some(4.0), Some(1.0)];
        let r = paired_ratio(&a, &b).unwrap();
        assert_eq!(r.pairs, 2);
        assert!((r.ratio - 0.75).abs() < 1e-15);
        // residuals 2 − 3 = −1 and 4 − 3 = 1
        assert!((r.stderr - (2.0f64 / 2.0).sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn noiseless_oracle_sweep_is_zero() {
        let c = cfg(r#"{"experiment": "oracle_sweep", "m": 8, "n": 12, "nhat": 14, "sigma2": 0.0,
            "sparsity_grid": [1, 2], "designs": [{"method": "gaussian"}, {"method": "tf2"}],
            "dictionary_kind": "gaussian", "estimators": ["oracle"], "trials": 5, "base_seed": 9}"#);
        let res = run_oracle_sweep(&c).unwrap();
        assert_eq!(res.rows.len(), 4);
        for row in &res.rows {
            assert!(row.mse_mean < 1e-24, "{row:?}");
            assert_eq!(row.trials, 5);
        }
    }

    #[test]
    fn recovery_sweep_is_deterministic() {
        let c = cfg(r#"{"experiment": "recovery_sweep", "n": 12, "nhat": 14, "s": 2, "sigma2": 1e-3,
            "measurement_grid": [6, 8], "designs": [{"method": "gaussian"}, {"method": "tf1", "alpha": 0.5}],
            "dictionary_kind": "gaussian", "estimators": ["oracle", "omp", "bpdn"], "trials": 6, "base_seed": 2}"#);
        let a = to_csv_string(&run_recovery_sweep(&c).unwrap()).unwrap();
        let b = to_csv_string(&run_recovery_sweep(&c).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 1 + 2 * 2 * 3);
    }

    #[test]
    fn canonical_energy_equals_n() {
        let c = cfg(r#"{"experiment": "energy_sweep", "m": 5, "sigma2": 0.0, "dimension_grid": [8, 16],
            "designs": [{"method": "gaussian"}, {"method": "tf2"}], "dictionary_kind": "canonical",
            "trials": 3, "base_seed": 4}"#);
        for row in run_energy_sweep(&c).unwrap().rows {
            assert!((row.sensed_energy_mean - row.n as f64).abs() < 1e-9);
            assert_eq!(row.estimator, NO_ESTIMATOR);
        }
    }

    #[test]
    fn histogram_counts_every_pair() {
        let c = cfg(r#"{"experiment": "histogram", "m": 6, "n": 10, "nhat": 12, "sigma2": 0.0,
            "designs": [{"method": "gaussian"}, {"method": "tf2"}], "dictionary_kind": "gaussian",
            "trials": 1, "base_seed": 0, "bins": 5}"#);
        let out = run_histogram(&c).unwrap();
        assert_eq!(out.histograms.len(), 2);
        for h in &out.histograms {
            assert_eq!(h.counts.iter().sum::<usize>(), 12 * 11 / 2);
        }
    }

    #[test]
    fn wrong_kind_rejected() {
        let c = cfg(r#"{"experiment": "histogram", "m": 6, "n": 10, "nhat": 12, "sigma2": 0.0,
            "designs": [{"method": "gaussian"}], "dictionary_kind": "gaussian", "trials": 1, "base_seed": 0}"#);
        assert!(matches!(run_energy_sweep(&c), Err(Error::Config(_))));
    }
}
