use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{check_enumeration, random_support, restricted_fit, Combinations, DenseMatrix};
use crate::rng::RandomStream;
use crate::scalar::Real;

/// Oracle least-squares MSE on a known support: `σ² Tr((A_JᵀA_J)⁻¹)`.
pub fn oracle_mse_support<T: Real>(a: &DenseMatrix<T>, support: &[usize], sigma2: T) -> Result<T> {
    check_support(a, support)?;
    let fit = restricted_fit(a, support, None)?;
    let trace_inv = fit
        .singular_values
        .iter()
        .fold(T::zero(), |acc, &s| acc + T::one() / (s * s));
    Ok(sigma2 * trace_inv)
}

pub(crate) fn check_support<T: Real>(a: &DenseMatrix<T>, support: &[usize]) -> Result<()> {
    if support.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter(format!("support {support:?} is not strictly increasing")));
    }
    if support.last().is_some_and(|&j| j >= a.ncols()) {
        return Err(Error::Parameter(format!(
            "support {support:?} out of range for {} columns",
            a.ncols()
        )));
    }
    Ok(())
}

/// How [`oracle_mse_expected`] averages over supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportAveraging {
    /// Every `s`-subset, guarded at one million subsets.
    Exact,
    /// `trials` supports drawn uniformly at random.
    Sampled { trials: usize, rng: RandomStream },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleEstimate<T: Real> {
    pub mean: T,
    /// Zero in exact mode.
    pub stderr: T,
    /// Supports that contributed to the mean.
    pub evaluated: usize,
    /// Sampled supports skipped for a singular restricted Gram.
    pub singular: usize,
}

/// Support-averaged oracle MSE `σ² E_J Tr((A_JᵀA_J)⁻¹)` under the uniform
/// distribution on `s`-subsets.
pub fn oracle_mse_expected<T: Real>(
    a: &DenseMatrix<T>,
    s: usize,
    sigma2: T,
    mode: SupportAveraging,
) -> Result<OracleEstimate<T>> {
    let nhat = a.ncols();
    if s == 0 || s > nhat {
        return Err(Error::Parameter(format!("need 1 <= s <= nhat, got s={s} nhat={nhat}")));
    }
    match mode {
        SupportAveraging::Exact => {
            check_enumeration(nhat, s)?;
            let supports: Vec<Vec<usize>> = Combinations::new(nhat, s).collect();
            let values = supports
                .par_iter()
                .map(|j| oracle_mse_support(a, j, sigma2))
                .collect::<Result<Vec<T>>>()?;
            let total = values.iter().fold(T::zero(), |acc, &v| acc + v);
            Ok(OracleEstimate {
                mean: total / T::from_count(values.len()),
                stderr: T::zero(),
                evaluated: values.len(),
                singular: 0,
            })
        }
        SupportAveraging::Sampled { trials, rng } => {
            if trials == 0 {
                return Err(Error::Parameter("sampled mode needs at least one trial".into()));
            }
            let mut gen = rng.rng();
            let mut values = Vec::with_capacity(trials);
            let mut singular = 0;
            for _ in 0..trials {
                let j = random_support(nhat, s, &mut gen);
                match oracle_mse_support(a, &j, sigma2) {
                    Ok(v) => values.push(v.as_f64()),
                    Err(Error::Singular(_)) => singular += 1,
                    Err(e) => return Err(e),
                }
            }
            if values.is_empty() {
                return Err(Error::Singular("every sampled support was singular".into()));
            }
            let (mean, stderr) = mean_stderr(&values);
            Ok(OracleEstimate {
                mean: T::lit(mean),
                stderr: T::lit(stderr),
                evaluated: values.len(),
                singular,
            })
        }
    }
}

/// Sample mean and `sd/√k` with the unbiased variance (zero for one sample).
pub(crate) fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}
