use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tfsense::bench::{self, ExperimentConfig};
use tfsense::design::{parseval_defect, DictionaryModes};
use tfsense::io::{format_real, load_matrix, load_vector, save_matrix, save_vector};
use tfsense::metrics::{empirical_strip, exact_ric, mutual_coherence, strip_bound};
use tfsense::{
    bpdn, design_gaussian, design_tf1, gen_parseval_target, normalize_sensing, omp, oracle_ls, BpdnParams,
    Dictionary64, Error, LeftFactor, Matrix64, RandomStream, Result,
};

#[derive(Parser)]
#[command(name = "tfsense", version, about = "Tight-frame sensing matrix design and sparse recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Gaussian,
    Tf1,
    Tf2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Left {
    Identity,
    RandomOrthonormal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Oracle,
    Omp,
    Bpdn,
}

#[derive(Subcommand)]
enum Command {
    /// Build a sensing matrix normalized to ‖Φ‖²_F = n.
    Design {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        m: usize,
        /// Regularization weight (tf1 only).
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Free left factor (tf2 only).
        #[arg(long, value_enum, default_value = "identity")]
        left_factor: Left,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coherence, sensed energy, Parseval defect and (optionally) the RIC.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        /// Dictionary; when given, `matrix` is the sensing matrix and the
        /// equivalent matrix ΦΨ is analyzed.
        #[arg(long)]
        dict: Option<PathBuf>,
        #[arg(long)]
        s: Option<usize>,
    },
    /// Recover a sparse vector from one measurement.
    Recover {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, value_enum)]
        algo: Algo,
        /// Comma-separated support (oracle only).
        #[arg(long, value_delimiter = ',')]
        support: Option<Vec<usize>>,
        /// Atom budget (omp only).
        #[arg(long)]
        max_support: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        residual_tol: f64,
        /// Residual budget ε (bpdn only).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        penalty: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run Monte Carlo experiments from a JSON config (object or array).
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact restricted isometry constant by enumeration.
    Ric {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        s: usize,
    },
    /// Statistical RIP probability bound, optionally with a Monte Carlo estimate.
    Strip {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        delta: f64,
        /// Frame to sample; prints the empirical frequency as well.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

fn num(v: f64) -> String {
    format_real(v)
}

fn print_pair(key: &str, value: impl std::fmt::Display) {
    println!("{key} {value}");
}

fn cmd_design(
    method: Method,
    dict: &Path,
    m: usize,
    alpha: Option<f64>,
    seed: u64,
    left: Left,
    out: &Path,
) -> Result<()> {
    if alpha.is_some() && !matches!(method, Method::Tf1) {
        return Err(usage("--alpha only applies to tf1"));
    }
    let psi = Dictionary64::from_matrix(load_matrix(dict)?)?;
    if m == 0 || m > psi.n() {
        return Err(Error::Dimensions(format!("need 1 <= m <= n, got m={m} n={}", psi.n())));
    }
    let phi = match method {
        Method::Gaussian => design_gaussian(m, psi.n(), RandomStream::new(seed, 0))?,
        Method::Tf1 => {
            let alpha = alpha.ok_or_else(|| usage("tf1 requires --alpha"))?;
            let target = gen_parseval_target(m, psi.nhat(), RandomStream::new(seed, 1))?;
            design_tf1(&psi, &target, alpha)?
        }
        Method::Tf2 => {
            let left_factor = match left {
                Left::Identity => LeftFactor::Identity,
                Left::RandomOrthonormal => LeftFactor::RandomOrthonormal,
            };
            let modes = DictionaryModes::new(&psi);
            tfsense::design::design_tf2_from_modes(&modes, m, left_factor, RandomStream::new(seed, 2))?
        }
    };
    let phi = normalize_sensing(&phi, psi.n())?;
    let a = phi.equivalent(&psi)?;
    save_matrix(phi.matrix(), out)?;
    print_pair("sensed_energy", num(a.norm_squared()));
    print_pair("mutual_coherence", num(mutual_coherence(&a, false)?));
    Ok(())
}

fn cmd_analyze(matrix: &Path, dict: Option<&Path>, s: Option<usize>) -> Result<()> {
    let mat: Matrix64 = load_matrix(matrix)?;
    let a = match dict {
        Some(path) => {
            let psi = Dictionary64::from_matrix(load_matrix(path)?)?;
            if mat.ncols() != psi.n() {
                return Err(Error::Mismatch(format!(
                    "matrix has {} columns but dictionary has {} rows",
                    mat.ncols(),
                    psi.n()
                )));
            }
            mat * psi.matrix()
        }
        None => mat,
    };
    if a.ncols() < 2 {
        return Err(Error::Dimensions("need at least two columns".into()));
    }
    print_pair("mutual_coherence", num(mutual_coherence(&a, false)?));
    print_pair("sensed_energy", num(a.norm_squared()));
    print_pair("parseval_defect", num(parseval_defect(&a)));
    if let Some(s) = s {
        let report = exact_ric(&a, s)?;
        print_pair("ric", num(report.delta_s));
        print_pair("ric_support", join(&report.argmax_support));
    }
    Ok(())
}

fn join(idx: &[usize]) -> String {
    if idx.is_empty() {
        return "-".into();
    }
    idx.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",")
}

#[allow(clippy::too_many_arguments)]
fn cmd_recover(
    matrix: &Path,
    y: &Path,
    algo: Algo,
    support: Option<Vec<usize>>,
    max_support: Option<usize>,
    residual_tol: f64,
    bp: (Option<f64>, Option<usize>, Option<f64>, Option<f64>),
    out: &Path,
) -> Result<()> {
    let a: Matrix64 = load_matrix(matrix)?;
    let y = load_vector(y)?;
    let (epsilon, max_iterations, tolerance, penalty) = bp;
    let bp_given = epsilon.is_some() || max_iterations.is_some() || tolerance.is_some() || penalty.is_some();
    if bp_given && !matches!(algo, Algo::Bpdn) {
        return Err(usage("solver flags only apply to bpdn"));
    }
    if support.is_some() && !matches!(algo, Algo::Oracle) {
        return Err(usage("--support only applies to oracle"));
    }
    if max_support.is_some() && !matches!(algo, Algo::Omp) {
        return Err(usage("--max-support only applies to omp"));
    }
    let result = match algo {
        Algo::Oracle => {
            let mut support = support.ok_or_else(|| usage("oracle requires --support"))?;
            support.sort_unstable();
            oracle_ls(&a, &y, &support)?
        }
        Algo::Omp => {
            let k = max_support.ok_or_else(|| usage("omp requires --max-support"))?;
            omp(&a, &y, k, residual_tol)?
        }
        Algo::Bpdn => {
            let mut params = BpdnParams::new(epsilon.ok_or_else(|| usage("bpdn requires --epsilon"))?);
            if let Some(v) = max_iterations {
                params.max_iterations = v;
            }
            if let Some(v) = tolerance {
                params.tolerance = v;
            }
            if let Some(v) = penalty {
                params.penalty = v;
            }
            bpdn(&a, &y, &params)?
        }
    };
    save_vector(&result.estimate, out)?;
    print_pair("support", join(&result.support));
    print_pair("residual_norm", num(result.residual_norm));
    print_pair("iterations", result.iterations);
    if !result.converged {
        return Err(Error::NotConverged {
            iterations: result.iterations,
            residual: result.residual_norm,
        });
    }
    Ok(())
}

fn cmd_bench(config: &Path, out: &Path) -> Result<()> {
    let text = fs::read_to_string(config).map_err(|e| Error::Config(format!("{}: {e}", config.display())))?;
    let configs = ExperimentConfig::list_from_json(&text)?;
    fs::create_dir_all(out).map_err(|e| Error::Config(format!("{}: {e}", out.display())))?;
    let mut seen: HashMap<&'static str, usize> = HashMap::new();
    for cfg in &configs {
        let label = cfg.experiment.label();
        let count = seen.entry(label).or_insert(0);
        *count += 1;
        let stem = if *count == 1 {
            label.to_string()
        } else {
            format!("{label}_{count}")
        };
        let output = bench::run(cfg)?;
        bench::write_csv(&output.result, out.join(format!("{stem}.csv")))?;
        if !output.histograms.is_empty() {
            bench::write_histogram_csv(&output.histograms, out.join(format!("{stem}_histogram.csv")))?;
        }
        println!("# {stem}");
        println!("design estimator s m n nhat mse_mean mse_stderr sensed_energy_mean singular_trials");
        for r in &output.result.rows {
            println!(
                "{} {} {} {} {} {} {} {} {} {}",
                r.design,
                r.estimator,
                r.s,
                r.m,
                r.n,
                r.nhat,
                num(r.mse_mean),
                num(r.mse_stderr),
                num(r.sensed_energy_mean),
                r.singular_trials
            );
        }
    }
    Ok(())
}

fn cmd_ric(matrix: &Path, s: usize) -> Result<()> {
    let a: Matrix64 = load_matrix(matrix)?;
    let report = exact_ric(&a, s)?;
    print_pair("ric", num(report.delta_s));
    print_pair("ric_support", join(&report.argmax_support));
    Ok(())
}

fn cmd_strip(
    mu: f64,
    s: usize,
    m: usize,
    delta: f64,
    matrix: Option<&Path>,
    trials: usize,
    seed: u64,
) -> Result<()> {
    let bound = strip_bound(mu, s, m, delta);
    print_pair("valid", bound.valid);
    print_pair("vacuous", bound.vacuous);
    print_pair("lower_bound", num(bound.lower_bound));
    if let Some(path) = matrix {
        let a: Matrix64 = load_matrix(path)?;
        let est = empirical_strip(&a, s, delta, trials, RandomStream::new(seed, 0))?;
        print_pair("empirical", num(est.probability));
        print_pair("empirical_stderr", num(est.stderr));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design {
            method,
            dict,
            m,
            alpha,
            seed,
            left_factor,
            out,
        } => cmd_design(method, &dict, m, alpha, seed, left_factor, &out),
        Command::Analyze { matrix, dict, s } => cmd_analyze(&matrix, dict.as_deref(), s),
        Command::Recover {
            matrix,
            y,
            algo,
            support,
            max_support,
            residual_tol,
            epsilon,
            max_iterations,
            tolerance,
            penalty,
            out,
        } => cmd_recover(
            &matrix,
            &y,
            algo,
            support,
            max_support,
            residual_tol,
            (epsilon, max_iterations, tolerance, penalty),
            &out,
        ),
        Command::Bench { config, out } => cmd_bench(&config, &out),
        Command::Ric { matrix, s } => cmd_ric(&matrix, s),
        Command::Strip {
            mu,
            s,
            m,
            delta,
            matrix,
            trials,
            seed,
        } => cmd_strip(mu, s, m, delta, matrix.as_deref(), trials, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
