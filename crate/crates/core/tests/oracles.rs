//! Cross-checks against independently computed reference values.

mod common;

use std::collections::HashSet;

use common::*;
use nalgebra::Cholesky;
use tfsense::bench::{self, stream_id, ExperimentConfig, SWEEP_CELL};
use tfsense::design::{design_tf1_raw, design_tf2_raw, DictionaryModes};
use tfsense::metrics::{exact_ric, oracle_mse_expected, oracle_mse_support, SupportAveraging};
use tfsense::{
    bpdn, design_gaussian, gen_gaussian_dictionary, gen_parseval_target, gen_sparse_signal, gen_specified_dictionary,
    measure, omp, oracle_ls, BpdnParams, Dictionary64, LeftFactor, Matrix64, NoiseModel, RandomStream, SensingMatrix64,
    SignalModel, SparseSignal64, SpikeKind, Vector64,
};

#[test]
fn ric_agrees_with_jacobi_enumeration() {
    let mut rng = TestRng::new(1);
    for trial in 0..12 {
        let m = 3 + trial % 4;
        let nhat = 6 + trial % 5;
        let s = 1 + trial % 3;
        let a = rng.matrix(m, nhat) / (m as f64).sqrt();
        let got = exact_ric(&a, s).unwrap().delta_s;
        let want = ric_by_jacobi(&a, s);
        assert!((got - want).abs() < 1e-10, "trial {trial}: {got} vs {want}");
    }
}

#[test]
fn oracle_mse_matches_trace_of_inverse() {
    let mut rng = TestRng::new(2);
    for _ in 0..20 {
        let a = rng.matrix(8, 12);
        let support = {
            let mut s: Vec<usize> = (0..12).collect();
            for i in 0..4 {
                let j = i + rng.below(12 - i);
                s.swap(i, j);
            }
            let mut s = s[..4].to_vec();
            s.sort_unstable();
            s
        };
        let sub = columns(&a, &support);
        let want = 0.3 * trace_inverse(&(sub.transpose() * &sub));
        let got = oracle_mse_support(&a, &support, 0.3).unwrap();
        assert!((got - want).abs() <= 1e-9 * want.max(1.0), "{got} vs {want}");
    }
}

#[test]
fn oracle_ls_satisfies_normal_equations() {
    let mut rng = TestRng::new(3);
    for _ in 0..20 {
        let a = rng.matrix(10, 15);
        let y = Vector64::from_fn(10, |_, _| rng.normal());
        let support = vec![1, 4, 7, 9];
        let r = oracle_ls(&a, &y, &support).unwrap();
        let sub = columns(&a, &support);
        let z = Vector64::from_fn(4, |i, _| r.estimate[support[i]]);
        let grad = sub.transpose() * (&sub * z - &y);
        assert!(grad.norm() <= 1e-8, "{}", grad.norm());
        for j in (0..15).filter(|j| !support.contains(j)) {
            assert_eq!(r.estimate[j], 0.0);
        }
    }
}

#[test]
fn sampled_expected_oracle_mse_brackets_exact() {
    let a = TestRng::new(4).matrix(8, 12);
    let exact = oracle_mse_expected(&a, 3, 1.0, SupportAveraging::Exact).unwrap();
    let sampled = oracle_mse_expected(
        &a,
        3,
        1.0,
        SupportAveraging::Sampled {
            trials: 10_000,
            rng: RandomStream::new(4, 0),
        },
    )
    .unwrap();
    assert_eq!(exact.evaluated, 220);
    assert!(
        (sampled.mean - exact.mean).abs() <= 3.0 * sampled.stderr,
        "{} vs {} (se {})",
        sampled.mean,
        exact.mean,
        sampled.stderr
    );
}

fn tf2_setup(seed: u64) -> (Dictionary64, Matrix64) {
    let psi = gen_gaussian_dictionary::<f64>(8, 10, RandomStream::new(seed, 0)).unwrap();
    let modes = DictionaryModes::new(&psi);
    let phi = design_tf2_raw(&modes, 4, LeftFactor::Identity, RandomStream::new(seed, 1)).unwrap();
    (psi, phi)
}

#[test]
fn tf2_energy_is_sum_of_inverse_top_eigenvalues() {
    for seed in 0..5 {
        let (psi, phi) = tf2_setup(seed);
        let g = psi.matrix() * psi.matrix().transpose();
        let mut eig = jacobi_eigenvalues(&g);
        eig.sort_by(|a, b| b.total_cmp(a));
        let want: f64 = eig[..4].iter().map(|l| 1.0 / l).sum();
        assert!((phi.norm_squared() - want).abs() < 1e-9 * want);
    }
}

#[test]
fn tf2_beats_every_sampled_feasible_design() {
    let mut rng = TestRng::new(5);
    for seed in 0..3 {
        let (psi, phi) = tf2_setup(seed);
        let g = psi.matrix() * psi.matrix().transpose();
        let constraint = &phi * &g * phi.transpose() - Matrix64::identity(4, 4);
        assert!(constraint.norm() < 1e-9);
        // every feasible Φ is W L⁻¹ with G = LLᵀ and W having orthonormal rows
        let l = Cholesky::new(g).unwrap().l();
        let l_inv = l.try_inverse().unwrap();
        let best = phi.norm_squared();
        for _ in 0..300 {
            let w = orthonormalize(&rng.matrix(8, 4)).transpose();
            let alt = &w * &l_inv;
            assert!(alt.norm_squared() >= best - 1e-9, "{} < {best}", alt.norm_squared());
        }
    }
}

fn tf1_objective(phi: &Matrix64, psi: &Matrix64, b: &Matrix64, alpha: f64) -> f64 {
    (phi * psi - b).norm_squared() + alpha * phi.norm_squared()
}

#[test]
fn tf1_is_stationary_and_minimal() {
    let mut rng = TestRng::new(6);
    for (seed, alpha) in [(0u64, 1.0), (1, 0.1), (2, 0.0)] {
        let psi = gen_gaussian_dictionary::<f64>(6, 9, RandomStream::new(seed, 0)).unwrap();
        let target = gen_parseval_target::<f64>(3, 9, RandomStream::new(seed, 1)).unwrap();
        let phi = design_tf1_raw(&psi, &target, alpha).unwrap();
        let p = psi.matrix();
        let b = target.matrix();
        let grad = (&phi * p - b) * p.transpose() + &phi * alpha;
        assert!(grad.norm() < 1e-10, "gradient {}", grad.norm());
        let base = tf1_objective(&phi, p, b, alpha);
        for _ in 0..50 {
            let e = rng.matrix(3, 6) * 1e-3;
            assert!(tf1_objective(&(&phi + e), p, b, alpha) >= base - 1e-12);
        }
    }
}

#[test]
fn parseval_target_rows_are_orthonormal() {
    let b = gen_parseval_target::<f64>(5, 11, RandomStream::new(0, 0)).unwrap();
    let bbt = b.matrix() * b.matrix().transpose();
    assert!((bbt - Matrix64::identity(5, 5)).norm() < 1e-12);
}

#[test]
fn specified_dictionary_has_geometric_spectrum() {
    let psi = gen_specified_dictionary::<f64>(8, 10, 0.9, RandomStream::new(7, 0)).unwrap();
    assert!((psi.matrix().norm_squared() - 10.0).abs() < 1e-9);
    let mut eig = jacobi_eigenvalues(&(psi.matrix() * psi.matrix().transpose()));
    eig.sort_by(|a, b| b.total_cmp(a));
    for w in eig.windows(2) {
        // eigenvalues of ΨΨᵀ are squared singular values
        assert!((w[1] / w[0] - 0.81).abs() < 1e-9, "{:?}", eig);
    }
}

#[test]
fn sparse_signal_statistics() {
    let model = SignalModel::new(10, 3, SpikeKind::Rademacher).unwrap();
    let draws = 20_000;
    let mut counts = [0usize; 10];
    let mut second = Matrix64::zeros(10, 10);
    for t in 0..draws {
        let x: SparseSignal64 = gen_sparse_signal(&model, RandomStream::new(8, t)).unwrap();
        assert_eq!(x.support().len(), 3);
        for &j in x.support() {
            counts[j] += 1;
        }
        let d = x.to_dense();
        second += &d * d.transpose();
    }
    let p = 0.3;
    let sd = (p * (1.0 - p) / draws as f64).sqrt();
    for c in counts {
        assert!((c as f64 / draws as f64 - p).abs() < 4.0 * sd);
    }
    second /= draws as f64;
    for i in 0..10 {
        for j in 0..10 {
            let want = if i == j { 0.3 } else { 0.0 };
            assert!((second[(i, j)] - want).abs() < 0.02, "({i},{j}) {}", second[(i, j)]);
        }
    }
}

#[test]
fn noise_energy_matches_variance() {
    let psi = Dictionary64::from_matrix(Matrix64::identity(6, 6)).unwrap();
    let phi = SensingMatrix64::from_matrix(Matrix64::identity(6, 6)).unwrap();
    let zero = SparseSignal64::zero(6);
    let noise = NoiseModel::new(0.25).unwrap();
    let energies: Vec<f64> = (0..20_000)
        .map(|t| measure(&phi, &psi, &zero, &noise, RandomStream::new(9, t)).unwrap().norm_squared())
        .collect();
    let k = energies.len() as f64;
    let mean = energies.iter().sum::<f64>() / k;
    // ‖n‖²/σ² is chi-square with 6 degrees of freedom: mean 6, variance 12
    let se = (12.0f64).sqrt() * 0.25 / k.sqrt();
    assert!((mean - 1.5).abs() < 4.0 * se, "{mean}");
}

fn lp_oracle_l1(a: &Matrix64, y: &Vector64) -> f64 {
    let (m, nhat) = a.shape();
    let mut best = f64::INFINITY;
    for support in subsets(nhat, m) {
        let sub = columns(a, &support);
        if let Some(z) = gauss_solve(&sub, y.as_slice()) {
            best = best.min(z.iter().map(|v| v.abs()).sum());
        }
    }
    best
}

#[test]
fn bpdn_matches_vertex_enumeration() {
    let mut rng = TestRng::new(10);
    for _ in 0..8 {
        let a = rng.matrix(5, 8);
        let mut x = Vector64::zeros(8);
        x[rng.below(8)] = 1.0 + rng.uniform();
        let j = rng.below(8);
        x[j] -= 0.5 + rng.uniform();
        let y = &a * &x;
        let r = bpdn(&a, &y, &BpdnParams::new(0.0)).unwrap();
        let got: f64 = r.estimate.iter().map(|v| v.abs()).sum();
        let want = lp_oracle_l1(&a, &y);
        assert!((got - want).abs() < 1e-4, "{got} vs {want}");
        assert!(r.residual_norm <= 1e-6);
    }
}

#[test]
fn omp_residuals_never_grow() {
    let mut rng = TestRng::new(11);
    let a = rng.matrix(12, 20);
    let y = Vector64::from_fn(12, |_, _| rng.normal());
    let mut last = y.norm();
    for k in 1..=8 {
        let r = omp(&a, &y, k, 0.0).unwrap();
        let distinct: HashSet<usize> = r.support.iter().copied().collect();
        assert_eq!(distinct.len(), r.support.len());
        assert!(r.residual_norm <= last + 1e-12);
        last = r.residual_norm;
    }
}

const SMALL_ORACLE: &str = r#"{
    "experiment": "oracle_sweep", "m": 8, "n": 12, "nhat": 14, "sigma2": 0.01,
    "sparsity_grid": [2, 3], "designs": [{"method": "gaussian"}],
    "dictionary_kind": "gaussian", "estimators": ["oracle"], "trials": 3000, "base_seed": 21
}"#;

#[test]
fn oracle_sweep_matches_closed_form_expectation() {
    let cfg = ExperimentConfig::from_json(SMALL_ORACLE).unwrap();
    let detail = bench::run_detailed(&cfg).unwrap();
    let psi = gen_gaussian_dictionary::<f64>(12, 14, RandomStream::new(21, stream_id(SWEEP_CELL, 0, 0))).unwrap();
    let phi = design_gaussian::<f64>(8, 12, RandomStream::new(21, stream_id(SWEEP_CELL, 8, 16))).unwrap();
    let a = phi.equivalent(&psi).unwrap();
    let rows = detail.summarize().unwrap().rows;
    for row in rows {
        let exact = oracle_mse_expected(&a, row.s, 0.01, SupportAveraging::Exact).unwrap().mean;
        assert!(
            (row.mse_mean - exact).abs() <= 3.0 * row.mse_stderr,
            "s={}: {} vs {exact} (se {})",
            row.s,
            row.mse_mean,
            row.mse_stderr
        );
        assert!((row.sensed_energy_mean - a.norm_squared()).abs() < 1e-9);
    }
}

#[test]
fn stderr_column_is_sample_deviation_over_root_trials() {
    let cfg = ExperimentConfig::from_json(&SMALL_ORACLE.replace("3000", "40")).unwrap();
    let detail = bench::run_detailed(&cfg).unwrap();
    let rows = detail.summarize().unwrap().rows;
    for (row, series) in rows.iter().zip(&detail.series) {
        let v = series.valid_losses();
        let k = v.len() as f64;
        let mean = v.iter().sum::<f64>() / k;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt();
        assert!((row.mse_stderr - sd / k.sqrt()).abs() <= 1e-15 * (1.0 + sd));
        assert!((row.mse_mean - mean).abs() <= 1e-15 * (1.0 + mean));
    }
}

#[test]
fn practical_estimators_do_not_beat_the_oracle() {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "recovery_sweep", "m": 12, "n": 16, "nhat": 20, "sigma2": 1e-3,
            "sparsity_grid": [2, 4], "designs": [{"method": "gaussian"}, {"method": "tf2"}],
            "dictionary_kind": "gaussian", "estimators": ["oracle", "omp", "bpdn"],
            "trials": 60, "base_seed": 3}"#,
    )
    .unwrap();
    let rows = bench::run_recovery_sweep(&cfg).unwrap().rows;
    for cell in rows.chunks(3) {
        let oracle = &cell[0];
        assert_eq!(oracle.estimator, "oracle");
        for other in &cell[1..] {
            let slack = 3.0 * (oracle.mse_stderr.powi(2) + other.mse_stderr.powi(2)).sqrt();
            assert!(
                other.mse_mean >= oracle.mse_mean - slack,
                "{} {} s={}: {} < {}",
                other.design,
                other.estimator,
                other.s,
                other.mse_mean,
                oracle.mse_mean
            );
        }
    }
}

#[test]
fn stream_ids_are_pairwise_distinct() {
    let mut seen = HashSet::new();
    for cell in [0u64, 1, 7, 1000, SWEEP_CELL] {
        for trial in [0u64, 1, 2, 255, 256, 65_535, (1 << 32) - 1] {
            for purpose in [0u64, 1, 2, 3, 16, 17, 215] {
                assert!(seen.insert(stream_id(cell, trial, purpose)));
            }
        }
    }
}

#[test]
fn smaller_alpha_senses_less_energy() {
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "histogram", "m": 40, "n": 64, "nhat": 80, "sigma2": 1e-4,
            "designs": [{"method": "gaussian"}, {"method": "tf1", "alpha": 1.0},
                        {"method": "tf1", "alpha": 0.1}, {"method": "tf2"}],
            "dictionary_kind": "gaussian", "trials": 1, "base_seed": 0}"#,
    )
    .unwrap();
    let out = bench::run_histogram(&cfg).unwrap();
    assert_eq!(out.histograms.len(), 4);
    let energy = |label: &str| {
        out.result
            .rows
            .iter()
            .find(|r| r.design == label)
            .unwrap()
            .sensed_energy_mean
    };
    assert!(energy("tf1(alpha=0.1)") < energy("tf1(alpha=1)"));
    for h in &out.histograms {
        assert_eq!(h.counts.iter().sum::<usize>(), 80 * 79 / 2);
    }
}

#[test]
fn tf2_on_canonical_basis_has_orthogonal_rows() {
    let psi = Dictionary64::from_matrix(Matrix64::identity(12, 12)).unwrap();
    let phi = tfsense::design_tf2(&psi, 5, LeftFactor::Identity, RandomStream::new(0, 0)).unwrap();
    let rows = phi.matrix() * phi.matrix().transpose();
    let off = rows - Matrix64::identity(5, 5) * (12.0 / 5.0);
    assert!(off.norm() < 1e-8);
}

#[test]
fn gaussian_design_energy_has_closed_form_mean() {
    // an isotropic Φ with ‖Φ‖²_F = n has E[ΦᵀΦ] = I, so E‖ΦΨ‖²_F = ‖Ψ‖²_F = n̂
    let cfg = ExperimentConfig::from_json(
        r#"{"experiment": "energy_sweep", "m": 10, "sigma2": 0.0, "dimension_grid": [20, 40],
            "designs": [{"method": "gaussian"}], "dictionary_kind": "gaussian",
            "trials": 400, "base_seed": 2}"#,
    )
    .unwrap();
    let detail = bench::run_detailed(&cfg).unwrap();
    for s in &detail.series {
        let k = s.energies.len() as f64;
        let mean = s.energies.iter().sum::<f64>() / k;
        let sd = (s.energies.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt();
        assert!((mean - s.nhat as f64).abs() < 3.0 * sd / k.sqrt(), "n={} mean {mean}", s.n);
    }
}

#[test]
fn csv_file_round_trip() {
    let cfg = ExperimentConfig::from_json(&SMALL_ORACLE.replace("3000", "5")).unwrap();
    let result = bench::run_oracle_sweep(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    bench::write_csv(&result, &path).unwrap();
    assert_eq!(bench::read_csv(&path).unwrap(), result);
}
