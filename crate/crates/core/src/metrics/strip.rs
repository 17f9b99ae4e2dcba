use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{random_support, DenseMatrix, Vector};
use crate::rng::RandomStream;
use crate::scalar::Real;

/// Probability bound for the statistical restricted isometry of a unit-norm
/// tight frame with coherence `mu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripBound {
    pub mu: f64,
    pub s: usize,
    pub m: usize,
    pub delta: f64,
    /// `δ` lies in the admissible range `√(237.42 μ² s ln(1+s/2)) + 2.57 s/m ≤ δ < 1`.
    pub valid: bool,
    /// `s ≤ 2`: the base `s/2` is at most one and the bound carries no information.
    pub vacuous: bool,
    /// `1 − (s/2)^{−(0.3894δ − s/m)² / (36 μ² s ln(1+s/2))}`, clamped to `[0, 1)`;
    /// zero when invalid.
    pub lower_bound: f64,
}

impl StripBound {
    /// Failure probability `η = 1 − lower_bound`.
    pub fn eta(&self) -> f64 {
        1.0 - self.lower_bound
    }

    /// Left end of the admissible `δ` range.
    pub fn delta_floor(mu: f64, s: usize, m: usize) -> f64 {
        let s_f = s as f64;
        (237.42 * mu * mu * s_f * (1.0 + s_f / 2.0).ln()).sqrt() + 2.57 * s_f / m as f64
    }
}

pub fn strip_bound(mu: f64, s: usize, m: usize, delta: f64) -> StripBound {
    let vacuous = s <= 2;
    let mut out = StripBound {
        mu,
        s,
        m,
        delta,
        valid: false,
        vacuous,
        lower_bound: 0.0,
    };
    if !(mu > 0.0) || s == 0 || m == 0 || !delta.is_finite() {
        return out;
    }
    out.valid = StripBound::delta_floor(mu, s, m) <= delta && delta < 1.0;
    if out.valid && !vacuous {
        let s_f = s as f64;
        let exponent =
            (0.3894 * delta - s_f / m as f64).powi(2) / (36.0 * mu * mu * s_f * (1.0 + s_f / 2.0).ln());
        out.lower_bound = (1.0 - (s_f / 2.0).powf(-exponent)).clamp(0.0, 1.0);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripEstimate {
    pub probability: f64,
    pub stderr: f64,
    pub trials: usize,
}

/// Monte Carlo frequency of `|‖Ax‖² − ‖x‖²| ≤ δ‖x‖²` over `s`-sparse `x`
/// with uniform support and uniform ±1 signs on unit magnitudes.
pub fn empirical_strip<T: Real>(
    a: &DenseMatrix<T>,
    s: usize,
    delta: T,
    trials: usize,
    rng: RandomStream,
) -> Result<StripEstimate> {
    let nhat = a.ncols();
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    if s == 0 || s > nhat {
        return Err(Error::Parameter(format!("need 1 <= s <= nhat, got s={s} nhat={nhat}")));
    }
    let mut gen = rng.rng();
    let energy = T::from_count(s);
    let mut hits = 0usize;
    for _ in 0..trials {
        let support = random_support(nhat, s, &mut gen);
        let mut ax = Vector::zeros(a.nrows());
        for &j in &support {
            let sign = if gen.random::<bool>() { T::one() } else { -T::one() };
            ax.axpy(sign, &a.column(j), T::one());
        }
        if (ax.norm_squared() - energy).abs() <= delta * energy {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    Ok(StripEstimate {
        probability: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    })
}

/// Reconstructed signal-to-noise ratio `‖f̃‖₂ / ‖f − f̃‖₂`.
pub fn rsnr<T: Real>(f: &Vector<T>, f_rec: &Vector<T>) -> Result<T> {
    if f.len() != f_rec.len() {
        return Err(Error::Mismatch(format!("lengths {} and {}", f.len(), f_rec.len())));
    }
    let err = (f - f_rec).norm();
    if err.is_zero() {
        return Err(Error::PerfectReconstruction);
    }
    Ok(f_rec.norm() / err)
}

/// [`rsnr`] in decibels, `20 log₁₀`.
pub fn rsnr_db<T: Real>(f: &Vector<T>, f_rec: &Vector<T>) -> Result<T> {
    Ok(T::lit(20.0) * rsnr(f, f_rec)?.log10())
}
