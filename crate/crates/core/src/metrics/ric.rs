use nalgebra::SymmetricEigen;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{check_enumeration, select_columns, Combinations, DenseMatrix};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct RicReport<T: Real> {
    pub s: usize,
    pub delta_s: T,
    /// First support, in lexicographic order, attaining `delta_s`.
    pub argmax_support: Vec<usize>,
}

fn support_deviation<T: Real>(a: &DenseMatrix<T>, support: &[usize]) -> T {
    let sub = select_columns(a, support);
    let eig = SymmetricEigen::new(sub.transpose() * sub).eigenvalues;
    eig.iter()
        .fold(T::zero(), |acc, &l| acc.max((l - T::one()).abs()))
}

/// Restricted isometry constant of order `s` by exhaustive enumeration:
/// the largest deviation from 1 of any eigenvalue of any `s × s` restricted Gram.
pub fn exact_ric<T: Real>(a: &DenseMatrix<T>, s: usize) -> Result<RicReport<T>> {
    let nhat = a.ncols();
    if s == 0 || s > nhat {
        return Err(Error::Parameter(format!("need 1 <= s <= nhat, got s={s} nhat={nhat}")));
    }
    check_enumeration(nhat, s)?;
    let supports: Vec<Vec<usize>> = Combinations::new(nhat, s).collect();
    let devs: Vec<T> = supports.par_iter().map(|j| support_deviation(a, j)).collect();
    let mut best = 0;
    for (k, &d) in devs.iter().enumerate() {
        if d > devs[best] {
            best = k;
        }
    }
    Ok(RicReport {
        s,
        delta_s: devs[best],
        argmax_support: supports[best].clone(),
    })
}

/// Error constants `(c₁, c₂)` of the ℓ₁ stability bound
/// `‖x* − x‖₂ ≤ c₁ s^{-1/2} ‖x − x_s‖₁ + c₂ ε`, valid for `δ₂ₛ < √2 − 1`.
pub fn bpdn_error_constants<T: Real>(delta_2s: T) -> Result<(T, T)> {
    let sqrt2 = T::lit(std::f64::consts::SQRT_2);
    if !(delta_2s >= T::zero() && delta_2s < sqrt2 - T::one()) {
        return Err(Error::Parameter(format!(
            "bound needs 0 <= delta_2s < sqrt(2) - 1, got {delta_2s}"
        )));
    }
    let denom = T::one() - (sqrt2 + T::one()) * delta_2s;
    let two = T::lit(2.0);
    let c1 = (two + (two * sqrt2 - two) * delta_2s) / denom;
    let c2 = T::lit(4.0) * (T::one() + delta_2s).sqrt() / denom;
    Ok((c1, c2))
}
