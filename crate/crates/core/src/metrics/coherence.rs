use crate::error::{Error, Result};
use crate::linalg::{frobenius_sq, DenseMatrix};
use crate::model::{Dictionary, SensingMatrix};
use crate::scalar::Real;

/// Coherence (Gram) matrix `AᵀA`.
pub fn gram<T: Real>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    a.transpose() * a
}

/// Largest `|aᵢᵀaⱼ|` over distinct columns. With `normalize_columns` the
/// columns are scaled to unit norm first.
pub fn mutual_coherence<T: Real>(a: &DenseMatrix<T>, normalize_columns: bool) -> Result<T> {
    if a.ncols() < 2 {
        return Err(Error::Dimensions("mutual coherence needs at least two columns".into()));
    }
    let q = if normalize_columns {
        let mut scaled = a.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            let norm = col.norm();
            if norm.is_zero() {
                return Err(Error::Parameter(format!("column {j} is zero")));
            }
            col /= norm;
        }
        gram(&scaled)
    } else {
        gram(a)
    };
    Ok(max_offdiag(&q))
}

fn max_offdiag<T: Real>(q: &DenseMatrix<T>) -> T {
    let mut mu = T::zero();
    for j in 1..q.ncols() {
        for i in 0..j {
            mu = mu.max(q[(i, j)].abs());
        }
    }
    mu
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram<T: Real> {
    /// `bins + 1` edges from 0 to the largest observed value.
    pub edges: Vec<T>,
    pub counts: Vec<usize>,
}

impl<T: Real> Histogram<T> {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Histogram of `|q_ij|` over the strict upper triangle, with uniform bins
/// on `[0, max]`. Bins are left-closed, the last one closed on both ends.
pub fn offdiag_histogram<T: Real>(q: &DenseMatrix<T>, bins: usize) -> Result<Histogram<T>> {
    if !q.is_square() {
        return Err(Error::Dimensions(format!(
            "coherence matrix must be square, got {} x {}",
            q.nrows(),
            q.ncols()
        )));
    }
    if bins == 0 {
        return Err(Error::Parameter("histogram needs at least one bin".into()));
    }
    let n = q.nrows();
    let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            if (q[(i, j)] - q[(j, i)]).abs().as_f64() > 1e-9 {
                return Err(Error::Parameter(format!("matrix is not symmetric at ({i}, {j})")));
            }
            values.push(q[(i, j)].abs());
        }
    }
    let top = values.iter().cloned().fold(T::zero(), T::max);
    let width = top / T::from_count(bins);
    let edges = (0..=bins).map(|k| width * T::from_count(k)).collect();
    let mut counts = vec![0usize; bins];
    for v in values {
        let idx = if width.is_zero() {
            0
        } else {
            (v / width).floor().as_f64().max(0.0) as usize
        };
        counts[idx.min(bins - 1)] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Sensed energy `‖ΦΨ‖²_F`.
pub fn sensed_energy<T: Real>(phi: &SensingMatrix<T>, psi: &Dictionary<T>) -> Result<T> {
    Ok(frobenius_sq(&phi.equivalent(psi)?))
}

/// `‖ΦΨ‖²_F / (m σ²)`.
pub fn sensed_snr<T: Real>(phi: &SensingMatrix<T>, psi: &Dictionary<T>, sigma2: T) -> Result<T> {
    if !(sigma2 > T::zero()) {
        return Err(Error::Parameter("sensed SNR needs a positive noise variance".into()));
    }
    Ok(sensed_energy(phi, psi)? / (T::from_count(phi.m()) * sigma2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceReport<T: Real> {
    pub mu: T,
    pub offdiag_histogram: Histogram<T>,
    pub gram_trace: T,
    pub sensed_energy: T,
}

pub fn coherence_report<T: Real>(
    phi: &SensingMatrix<T>,
    psi: &Dictionary<T>,
    bins: usize,
) -> Result<CoherenceReport<T>> {
    let a = phi.equivalent(psi)?;
    let q = gram(&a);
    Ok(CoherenceReport {
        mu: mutual_coherence(&a, false)?,
        offdiag_histogram: offdiag_histogram(&q, bins)?,
        gram_trace: q.trace(),
        sensed_energy: frobenius_sq(&a),
    })
}
