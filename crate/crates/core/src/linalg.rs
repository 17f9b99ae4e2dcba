//! Dense linear-algebra helpers shared by the design, metric and recovery code.

use nalgebra::{DMatrix, DVector, SVD};
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::normal;
use crate::scalar::Real;

pub type DenseMatrix<T> = DMatrix<T>;
pub type Vector<T> = DVector<T>;

/// Largest condition number of a Gram matrix still treated as invertible.
pub const COND_LIMIT: f64 = 1e12;

/// Upper bound on the number of supports an exhaustive routine will visit.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

pub fn frobenius_sq<T: Real>(m: &DenseMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, &v| acc + v * v)
}

pub fn gaussian_matrix<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix<T> {
    // column-major fill order is part of the reproducibility contract
    DenseMatrix::from_fn(rows, cols, |_, _| normal::<T, R>(rng))
}

/// Haar-distributed `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn random_orthonormal_columns<T: Real, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DenseMatrix<T> {
    assert!(rows >= cols, "need rows >= cols for orthonormal columns");
    let g = gaussian_matrix::<T, R>(rows, cols, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        if r[(j, j)] < T::zero() {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub fn select_columns<T: Real>(a: &DenseMatrix<T>, support: &[usize]) -> DenseMatrix<T> {
    DenseMatrix::from_fn(a.nrows(), support.len(), |i, j| a[(i, support[j])])
}

/// Thin SVD with singular values in non-increasing order.
pub fn sorted_svd<T: Real>(m: DenseMatrix<T>, compute_u: bool, compute_v: bool) -> SVD<T, nalgebra::Dyn, nalgebra::Dyn> {
    let mut svd = SVD::new(m, compute_u, compute_v);
    svd.sort_by_singular_values();
    svd
}

/// Least-squares data on one support: singular values of `A_J` and the
/// minimiser of `‖A_J z − y‖₂` when requested.
pub(crate) struct RestrictedFit<T: Real> {
    pub singular_values: Vector<T>,
    pub solution: Option<Vector<T>>,
}

pub(crate) fn restricted_fit<T: Real>(
    a: &DenseMatrix<T>,
    support: &[usize],
    y: Option<&Vector<T>>,
) -> Result<RestrictedFit<T>> {
    if support.is_empty() {
        return Ok(RestrictedFit {
            singular_values: Vector::zeros(0),
            solution: y.map(|_| Vector::zeros(0)),
        });
    }
    if support.len() > a.nrows() {
        return Err(Error::Singular(format!(
            "support {support:?} has more atoms than the {} rows",
            a.nrows()
        )));
    }
    let sub = select_columns(a, support);
    let sv = sub.clone().singular_values();
    let smax = sv.iter().cloned().fold(T::zero(), T::max);
    let smin = sv.iter().cloned().fold(smax, T::min);
    let ok = smin > T::zero() && {
        let ratio = (smax / smin).as_f64();
        ratio * ratio < COND_LIMIT
    };
    if !ok {
        return Err(Error::Singular(format!(
            "restricted Gram on support {support:?} is singular or ill-conditioned"
        )));
    }
    let solution = match y {
        Some(y) => {
            let qr = sub.qr();
            let qty = qr.q().tr_mul(y);
            Some(
                qr.r()
                    .solve_upper_triangular(&qty)
                    .ok_or_else(|| Error::Singular(format!("support {support:?}: triangular solve failed")))?,
            )
        }
        None => None,
    };
    Ok(RestrictedFit {
        singular_values: sv,
        solution,
    })
}

/// `C(n, k)` saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub(crate) fn check_enumeration(n: usize, k: usize) -> Result<()> {
    if binomial(n, k) > ENUMERATION_LIMIT {
        Err(Error::ScaleGuard {
            n,
            k,
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Lexicographic iterator over the `k`-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Uniform random `k`-subset of `0..n`, sorted.
pub fn random_support<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    let mut s = rand::seq::index::sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}
