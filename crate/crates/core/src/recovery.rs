//! Sparse estimators: support-oracle least squares, orthogonal matching
//! pursuit and basis pursuit denoise.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::linalg::{restricted_fit, sorted_svd, DenseMatrix, Vector};
use crate::metrics::oracle::check_support;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult<T: Real> {
    pub estimate: Vector<T>,
    /// Sorted indices of the nonzero entries of `estimate` (for OMP and the
    /// oracle, the selected atoms).
    pub support: Vec<usize>,
    pub iterations: usize,
    pub residual_norm: T,
    pub converged: bool,
}

fn check_measurements<T: Real>(a: &DenseMatrix<T>, y: &Vector<T>) -> Result<()> {
    if a.nrows() != y.len() {
        return Err(Error::Mismatch(format!(
            "matrix has {} rows but measurement vector has length {}",
            a.nrows(),
            y.len()
        )));
    }
    Ok(())
}

fn scatter<T: Real>(nhat: usize, support: &[usize], values: &Vector<T>) -> Vector<T> {
    let mut x = Vector::zeros(nhat);
    for (&j, &v) in support.iter().zip(values.iter()) {
        x[j] = v;
    }
    x
}

/// Least squares restricted to a known support.
pub fn oracle_ls<T: Real>(a: &DenseMatrix<T>, y: &Vector<T>, support: &[usize]) -> Result<RecoveryResult<T>> {
    check_measurements(a, y)?;
    check_support(a, support)?;
    let fit = restricted_fit(a, support, Some(y))?;
    let estimate = scatter(a.ncols(), support, &fit.solution.expect("solution requested"));
    let residual_norm = (a * &estimate - y).norm();
    Ok(RecoveryResult {
        estimate,
        support: support.to_vec(),
        iterations: 1,
        residual_norm,
        converged: true,
    })
}

/// Orthogonal matching pursuit.
///
/// Atoms are chosen by largest `|aⱼᵀr| / ‖aⱼ‖` (ties to the lowest index) and
/// the coefficients re-fitted by least squares on the raw columns after each
/// pick. Stops after `max_support` atoms or once `‖r‖₂ ≤ residual_tol`.
pub fn omp<T: Real>(
    a: &DenseMatrix<T>,
    y: &Vector<T>,
    max_support: usize,
    residual_tol: T,
) -> Result<RecoveryResult<T>> {
    check_measurements(a, y)?;
    let (m, nhat) = a.shape();
    if max_support > m.min(nhat) {
        return Err(Error::Parameter(format!(
            "max_support {max_support} exceeds min(m, nhat) = {}",
            m.min(nhat)
        )));
    }
    let norms: Vec<T> = a.column_iter().map(|c| c.norm()).collect();
    if let Some(j) = norms.iter().position(|n| n.is_zero()) {
        return Err(Error::Parameter(format!("column {j} is zero")));
    }

    let mut selected = vec![false; nhat];
    let mut support: Vec<usize> = Vec::with_capacity(max_support);
    let mut estimate = Vector::zeros(nhat);
    let mut residual = y.clone();
    let mut iterations = 0;
    while support.len() < max_support && residual.norm() > residual_tol {
        let corr = a.tr_mul(&residual);
        let mut best: Option<(usize, T)> = None;
        for j in (0..nhat).filter(|&j| !selected[j]) {
            let c = corr[j].abs() / norms[j];
            if best.is_none_or(|(_, b)| c > b) {
                best = Some((j, c));
            }
        }
        let Some((j, c)) = best else { break };
        if c.is_zero() {
            break;
        }
        selected[j] = true;
        let pos = support.partition_point(|&k| k < j);
        support.insert(pos, j);
        iterations += 1;

        let fit = restricted_fit(a, &support, Some(y))?;
        estimate = scatter(nhat, &support, &fit.solution.expect("solution requested"));
        residual = y - a * &estimate;
    }
    Ok(RecoveryResult {
        residual_norm: residual.norm(),
        estimate,
        support,
        iterations,
        converged: true,
    })
}

/// Settings for [`bpdn`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BpdnParams<T: Real> {
    /// Residual budget `ε` in `‖Ax − y‖₂ ≤ ε`.
    pub epsilon: T,
    pub max_iterations: usize,
    pub tolerance: T,
    /// Augmented-Lagrangian penalty `ρ`.
    pub penalty: T,
}

impl<T: Real> BpdnParams<T> {
    pub fn new(epsilon: T) -> Self {
        Self {
            epsilon,
            max_iterations: 5000,
            tolerance: T::lit(1e-7),
            penalty: T::one(),
        }
    }

    /// `ε² = σ²(m + 2√(2m))`, a high-probability bound on `‖n‖²` for
    /// `n ~ N(0, σ²I_m)`.
    pub fn noise_budget(sigma2: T, m: usize) -> T {
        let m = T::from_count(m);
        (sigma2 * (m + T::lit(2.0) * (T::lit(2.0) * m).sqrt())).sqrt()
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon >= T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::Parameter(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if !(self.tolerance > T::zero()) {
            return Err(Error::Parameter("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Parameter("max_iterations must be >= 1".into()));
        }
        if !(self.penalty > T::zero()) {
            return Err(Error::Parameter("penalty must be positive".into()));
        }
        Ok(())
    }
}

fn soft_threshold<T: Real>(v: T, t: T) -> T {
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        T::zero()
    }
}

fn l1<T: Real>(x: &Vector<T>) -> T {
    x.iter().fold(T::zero(), |acc, v| acc + v.abs())
}

/// Distance from `y` to the column space of `a`.
fn range_distance<T: Real>(a: &DenseMatrix<T>, y: &Vector<T>) -> T {
    let svd = sorted_svd(a.clone(), true, false);
    let u = svd.u.expect("u requested");
    let top = svd.singular_values[0];
    let tol = top * T::lit(1e-12) * T::from_count(a.nrows().max(a.ncols()));
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let basis = u.columns(0, rank);
    let proj = basis * (basis.transpose() * y);
    (y - proj).norm()
}

/// Basis pursuit denoise: `min ‖x‖₁ s.t. ‖Ax − y‖₂ ≤ ε`.
///
/// Alternating-direction splitting with `z = x` carrying the ℓ₁ term
/// (soft-threshold step) and `w = Ax` carrying the ball constraint
/// (projection onto the ε-ball around `y`); the `x` step is a fixed
/// linear solve with `I + AᵀA`. With `ε = 0` the final iterate is
/// replaced by the exact least-squares fit on its support when that
/// fit is feasible and no larger in ℓ₁.
pub fn bpdn<T: Real>(a: &DenseMatrix<T>, y: &Vector<T>, params: &BpdnParams<T>) -> Result<RecoveryResult<T>> {
    check_measurements(a, y)?;
    params.validate()?;
    let (m, nhat) = a.shape();
    let eps = params.epsilon;
    let scale = T::one().max(y.norm());

    let dist = range_distance(a, y);
    if dist > eps + T::lit(1e-9) * scale {
        return Err(Error::Infeasible(format!(
            "measurement lies {:.6e} from the range of A, beyond epsilon {:.6e}",
            dist.as_f64(),
            eps.as_f64()
        )));
    }

    // (I + AᵀA)⁻¹ v = v − Aᵀ (I + AAᵀ)⁻¹ A v
    let mut inner = a * a.transpose();
    for i in 0..m {
        inner[(i, i)] += T::one();
    }
    let chol = Cholesky::new(inner).ok_or_else(|| Error::Singular("I + AAᵀ not positive definite".into()))?;
    let solve = |v: Vector<T>| -> Vector<T> {
        let av = a * &v;
        let corr = a.tr_mul(&chol.solve(&av));
        v - corr
    };
    let project = |v: Vector<T>| -> Vector<T> {
        let d = &v - y;
        let nd = d.norm();
        if nd <= eps {
            v
        } else {
            y + d * (eps / nd)
        }
    };

    let thresh = T::one() / params.penalty;
    let mut z = Vector::<T>::zeros(nhat);
    let mut w = project(Vector::zeros(m));
    let mut u1 = Vector::<T>::zeros(nhat);
    let mut u2 = Vector::<T>::zeros(m);
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=params.max_iterations {
        iterations = it;
        let x = solve(&z - &u1 + a.tr_mul(&(&w - &u2)));
        let ax = a * &x;
        let z_prev = z.clone();
        z = (&x + &u1).map(|v| soft_threshold(v, thresh));
        w = project(&ax + &u2);
        let r1 = &x - &z;
        let r2 = &ax - &w;
        u1 += &r1;
        u2 += &r2;
        let change = (&z - &z_prev).norm();
        if change < params.tolerance && r1.norm() < params.tolerance && r2.norm() < params.tolerance {
            converged = true;
            break;
        }
    }

    let mut estimate = z;
    if eps.is_zero() {
        if let Some(polished) = polish_equality(a, y, &estimate, scale) {
            estimate = polished;
        }
    }
    let residual_norm = (a * &estimate - y).norm();
    let support = estimate
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(j, _)| j)
        .collect();
    Ok(RecoveryResult {
        estimate,
        support,
        iterations,
        residual_norm,
        converged,
    })
}

fn polish_equality<T: Real>(a: &DenseMatrix<T>, y: &Vector<T>, x: &Vector<T>, scale: T) -> Option<Vector<T>> {
    let peak = x.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    if peak.is_zero() {
        return None;
    }
    let cut = peak * T::lit(1e-6);
    let support: Vec<usize> = (0..x.len()).filter(|&j| x[j].abs() > cut).collect();
    if support.len() > a.nrows() {
        return None;
    }
    let fit = restricted_fit(a, &support, Some(y)).ok()?;
    let candidate = scatter(x.len(), &support, &fit.solution?);
    let feasible = (a * &candidate - y).norm() <= T::lit(1e-9) * scale;
    let no_worse = l1(&candidate) <= l1(x) + T::lit(1e-6) * scale;
    (feasible && no_worse).then_some(candidate)
}
