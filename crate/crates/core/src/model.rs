//! Dictionaries, sensing matrices, sparse signals and the noisy measurement operator.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius_sq, gaussian_matrix, random_orthonormal_columns, random_support, DenseMatrix, Vector,
};
use crate::rng::{normal, RandomStream};
use crate::scalar::Real;

fn check_finite<T: Real>(m: &DenseMatrix<T>, what: &str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{what} has non-finite entries")))
    }
}

/// Scales `m` in place so that `‖m‖²_F = target`.
pub(crate) fn rescale_frobenius<T: Real>(m: &mut DenseMatrix<T>, target: T) -> Result<()> {
    let energy = frobenius_sq(m);
    if energy <= T::zero() {
        return Err(Error::Parameter("cannot rescale a zero matrix".into()));
    }
    let scale = (target / energy).sqrt();
    *m *= scale;
    Ok(())
}

/// Sparsifying dictionary `Ψ` of shape `n × n̂`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dictionary<T: Real> {
    matrix: DenseMatrix<T>,
}

impl<T: Real> Dictionary<T> {
    /// Wraps an existing matrix. Requires `n̂ ≥ n ≥ 1` and finite entries;
    /// no normalization is applied.
    pub fn from_matrix(matrix: DenseMatrix<T>) -> Result<Self> {
        let (n, nhat) = matrix.shape();
        if n == 0 || nhat < n {
            return Err(Error::Dimensions(format!(
                "dictionary must be n x nhat with 1 <= n <= nhat, got {n} x {nhat}"
            )));
        }
        check_finite(&matrix, "dictionary")?;
        Ok(Self { matrix })
    }

    /// Rescales to `‖Ψ‖²_F = n̂`.
    pub fn normalized(mut self) -> Result<Self> {
        let nhat = T::from_count(self.nhat());
        rescale_frobenius(&mut self.matrix, nhat)?;
        Ok(self)
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn nhat(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Projection `Φ` of shape `m × n` with `m ≤ n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SensingMatrix<T: Real> {
    matrix: DenseMatrix<T>,
}

impl<T: Real> SensingMatrix<T> {
    pub fn from_matrix(matrix: DenseMatrix<T>) -> Result<Self> {
        let (m, n) = matrix.shape();
        if m == 0 || m > n {
            return Err(Error::Dimensions(format!(
                "sensing matrix must be m x n with 1 <= m <= n, got {m} x {n}"
            )));
        }
        check_finite(&matrix, "sensing matrix")?;
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix<T> {
        self.matrix
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    /// Equivalent sensing matrix `A = ΦΨ`.
    pub fn equivalent(&self, psi: &Dictionary<T>) -> Result<DenseMatrix<T>> {
        if self.n() != psi.n() {
            return Err(Error::Mismatch(format!(
                "sensing matrix has {} columns but dictionary has {} rows",
                self.n(),
                psi.n()
            )));
        }
        Ok(&self.matrix * psi.matrix())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpikeKind {
    /// Values are ±1 with equal probability.
    #[default]
    Rademacher,
    /// Values are standard normal.
    Gaussian,
}

/// Exact-cardinality sparse source: support uniform over all `s`-subsets,
/// unit second moment on each spike.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignalModel {
    pub nhat: usize,
    pub s: usize,
    pub spike_kind: SpikeKind,
}

impl SignalModel {
    pub fn new(nhat: usize, s: usize, spike_kind: SpikeKind) -> Result<Self> {
        let model = Self { nhat, s, spike_kind };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 || self.s > self.nhat {
            return Err(Error::Parameter(format!(
                "sparsity must satisfy 1 <= s <= nhat, got s={} nhat={}",
                self.s, self.nhat
            )));
        }
        Ok(())
    }

    pub(crate) fn sample<T: Real, R: Rng + ?Sized>(&self, rng: &mut R) -> SparseSignal<T> {
        let support = random_support(self.nhat, self.s, rng);
        let values = support
            .iter()
            .map(|_| match self.spike_kind {
                SpikeKind::Rademacher => {
                    if rng.random::<bool>() {
                        T::one()
                    } else {
                        -T::one()
                    }
                }
                SpikeKind::Gaussian => normal::<T, R>(rng),
            })
            .collect();
        SparseSignal {
            nhat: self.nhat,
            support,
            values,
        }
    }
}

/// Sparse representation `x` stored as its support and the values on it.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSignal<T: Real> {
    nhat: usize,
    support: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> SparseSignal<T> {
    pub fn new(nhat: usize, support: Vec<usize>, values: Vec<T>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::Mismatch(format!(
                "{} support indices but {} values",
                support.len(),
                values.len()
            )));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter("support indices must be strictly increasing".into()));
        }
        if support.last().is_some_and(|&i| i >= nhat) {
            return Err(Error::Parameter(format!("support index out of range 0..{nhat}")));
        }
        if values.iter().any(|v| v.is_zero()) {
            return Err(Error::Parameter("values on the support must be nonzero".into()));
        }
        Ok(Self { nhat, support, values })
    }

    /// The all-zero signal.
    pub fn zero(nhat: usize) -> Self {
        Self {
            nhat,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_dense(x: &Vector<T>) -> Self {
        let (support, values) = x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, &v)| (i, v))
            .unzip();
        Self {
            nhat: x.len(),
            support,
            values,
        }
    }

    pub fn nhat(&self) -> usize {
        self.nhat
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> Vector<T> {
        let mut x = Vector::zeros(self.nhat);
        for (&i, &v) in self.support.iter().zip(&self.values) {
            x[i] = v;
        }
        x
    }
}

/// White Gaussian noise with per-component variance `sigma2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel<T: Real> {
    pub sigma2: T,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(sigma2: T) -> Result<Self> {
        if !(sigma2 >= T::zero()) || !sigma2.is_finite() {
            return Err(Error::Parameter(format!("noise variance must be >= 0, got {sigma2}")));
        }
        Ok(Self { sigma2 })
    }

    pub fn noiseless() -> Self {
        Self { sigma2: T::zero() }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vector<T> {
        if self.sigma2.is_zero() {
            return Vector::zeros(len);
        }
        let sd = self.sigma2.sqrt();
        Vector::from_fn(len, |_, _| normal::<T, R>(rng) * sd)
    }
}

fn check_dictionary_dims(n: usize, nhat: usize) -> Result<()> {
    if n == 0 || nhat < n {
        return Err(Error::Dimensions(format!(
            "need 1 <= n <= nhat, got n={n} nhat={nhat}"
        )));
    }
    Ok(())
}

pub(crate) fn gaussian_dictionary_with<T: Real, R: Rng + ?Sized>(
    n: usize,
    nhat: usize,
    rng: &mut R,
) -> Result<Dictionary<T>> {
    check_dictionary_dims(n, nhat)?;
    Dictionary::from_matrix(gaussian_matrix(n, nhat, rng))?.normalized()
}

/// I.i.d. standard normal `n × n̂` dictionary rescaled to `‖Ψ‖²_F = n̂`.
pub fn gen_gaussian_dictionary<T: Real>(n: usize, nhat: usize, rng: RandomStream) -> Result<Dictionary<T>> {
    gaussian_dictionary_with(n, nhat, &mut rng.rng())
}

pub(crate) fn specified_dictionary_with<T: Real, R: Rng + ?Sized>(
    n: usize,
    nhat: usize,
    ratio: T,
    rng: &mut R,
) -> Result<Dictionary<T>> {
    check_dictionary_dims(n, nhat)?;
    if !(ratio > T::zero() && ratio <= T::one()) {
        return Err(Error::Parameter(format!("singular value ratio must lie in (0, 1], got {ratio}")));
    }
    let u = random_orthonormal_columns::<T, R>(n, n, rng);
    // only the first n right singular vectors meet a nonzero singular value
    let v = random_orthonormal_columns::<T, R>(nhat, n, rng);
    let mut scaled_u = u;
    let mut lambda = T::one();
    for mut col in scaled_u.column_iter_mut() {
        col *= lambda;
        lambda *= ratio;
    }
    Dictionary::from_matrix(scaled_u * v.transpose())?.normalized()
}

/// Dictionary `U Λ Vᵀ` with Haar-random `U`, `V` and geometric singular values
/// `1, ratio, ratio², …`, rescaled to `‖Ψ‖²_F = n̂`.
pub fn gen_specified_dictionary<T: Real>(
    n: usize,
    nhat: usize,
    ratio: T,
    rng: RandomStream,
) -> Result<Dictionary<T>> {
    specified_dictionary_with(n, nhat, ratio, &mut rng.rng())
}

pub fn canonical_dictionary<T: Real>(n: usize) -> Result<Dictionary<T>> {
    check_dictionary_dims(n, n)?;
    Dictionary::from_matrix(DenseMatrix::identity(n, n))
}

pub fn gen_sparse_signal<T: Real>(model: &SignalModel, rng: RandomStream) -> Result<SparseSignal<T>> {
    model.validate()?;
    Ok(model.sample(&mut rng.rng()))
}

/// `A x` for a sparse `x`, touching only the support columns.
pub(crate) fn apply_sparse<T: Real>(a: &DenseMatrix<T>, x: &SparseSignal<T>) -> Vector<T> {
    let mut y = Vector::zeros(a.nrows());
    for (&j, &v) in x.support().iter().zip(x.values()) {
        y.axpy(v, &a.column(j), T::one());
    }
    y
}

/// `y = ΦΨx + n` with `n ~ N(0, σ²I)`.
pub fn measure<T: Real>(
    phi: &SensingMatrix<T>,
    psi: &Dictionary<T>,
    x: &SparseSignal<T>,
    noise: &NoiseModel<T>,
    rng: RandomStream,
) -> Result<Vector<T>> {
    if phi.n() != psi.n() {
        return Err(Error::Mismatch(format!(
            "sensing matrix is {}x{} but dictionary is {}x{}",
            phi.m(),
            phi.n(),
            psi.n(),
            psi.nhat()
        )));
    }
    if x.nhat() != psi.nhat() {
        return Err(Error::Mismatch(format!(
            "signal length {} does not match dictionary width {}",
            x.nhat(),
            psi.nhat()
        )));
    }
    let f = apply_sparse(psi.matrix(), x);
    let clean = phi.matrix() * f;
    Ok(clean + noise.sample(phi.m(), &mut rng.rng()))
}
