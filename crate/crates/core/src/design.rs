//! Sensing-matrix constructions: the random Gaussian baseline, the
//! regularised target-matching design and the mode-inversion design.
//!
//! Every public constructor returns a matrix normalised to the sensing
//! cost `‖Φ‖²_F = n`; the `*_raw` variants expose the unnormalised solutions.

use nalgebra::{Cholesky, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius_sq, gaussian_matrix, random_orthonormal_columns, sorted_svd, DenseMatrix, COND_LIMIT,
};
use crate::model::{rescale_frobenius, Dictionary, SensingMatrix};
use crate::rng::RandomStream;
use crate::scalar::Real;

/// Smallest dictionary singular value the mode-inversion design will invert.
pub const MODE_FLOOR: f64 = 1e-12;

/// Relative gap below which two dictionary singular values count as equal.
const MODE_TIE: f64 = 1e-9;

/// Target `m × n̂` frame with `BBᵀ = I_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsevalTarget<T: Real> {
    matrix: DenseMatrix<T>,
}

impl<T: Real> ParsevalTarget<T> {
    /// Accepts `matrix` if its rows are orthonormal to within `1e-8`.
    pub fn from_matrix(matrix: DenseMatrix<T>) -> Result<Self> {
        let m = matrix.nrows();
        if m == 0 || m > matrix.ncols() {
            return Err(Error::Dimensions(format!(
                "Parseval target must be m x nhat with 1 <= m <= nhat, got {} x {}",
                m,
                matrix.ncols()
            )));
        }
        let defect = (&matrix * matrix.transpose() - DenseMatrix::identity(m, m)).norm();
        if defect.as_f64() > 1e-8 {
            return Err(Error::Parameter(format!(
                "target rows are not orthonormal (defect {:.3e})",
                defect.as_f64()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DenseMatrix<T> {
        &self.matrix
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn nhat(&self) -> usize {
        self.matrix.ncols()
    }
}

pub(crate) fn parseval_target_with<T: Real, R: Rng + ?Sized>(
    m: usize,
    nhat: usize,
    rng: &mut R,
) -> Result<ParsevalTarget<T>> {
    if m == 0 || m > nhat {
        return Err(Error::Dimensions(format!("need 1 <= m <= nhat, got m={m} nhat={nhat}")));
    }
    // polar factor of a Gaussian matrix: same singular vectors, unit spectrum
    let g = gaussian_matrix::<T, R>(m, nhat, rng);
    let svd = sorted_svd(g, true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    Ok(ParsevalTarget { matrix: u * v_t })
}

pub fn gen_parseval_target<T: Real>(m: usize, nhat: usize, rng: RandomStream) -> Result<ParsevalTarget<T>> {
    parseval_target_with(m, nhat, &mut rng.rng())
}

/// Choice of the free orthonormal factor on the left of the mode-inversion design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftFactor {
    #[default]
    Identity,
    RandomOrthonormal,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DesignMethod<T: Real> {
    Gaussian,
    Tf1 { alpha: T, target: ParsevalTarget<T> },
    Tf2 { left_factor: LeftFactor },
}

impl<T: Real> DesignMethod<T> {
    /// Builds the normalised sensing matrix for `psi` with `m` rows.
    pub fn build(&self, psi: &Dictionary<T>, m: usize, rng: RandomStream) -> Result<SensingMatrix<T>> {
        match self {
            DesignMethod::Gaussian => design_gaussian(m, psi.n(), rng),
            DesignMethod::Tf1 { alpha, target } => {
                if target.m() != m {
                    return Err(Error::Mismatch(format!(
                        "target has {} rows but {m} measurements requested",
                        target.m()
                    )));
                }
                design_tf1(psi, target, *alpha)
            }
            DesignMethod::Tf2 { left_factor } => design_tf2(psi, m, *left_factor, rng),
        }
    }
}

/// Rescales `phi` by a positive factor so that `‖Φ‖²_F = n`.
pub fn normalize_sensing<T: Real>(phi: &SensingMatrix<T>, n: usize) -> Result<SensingMatrix<T>> {
    let mut mat = phi.matrix().clone();
    rescale_frobenius(&mut mat, T::from_count(n))
        .map_err(|_| Error::Parameter("cannot normalize a zero sensing matrix".into()))?;
    SensingMatrix::from_matrix(mat)
}

fn normalized_from_raw<T: Real>(raw: DenseMatrix<T>, n: usize) -> Result<SensingMatrix<T>> {
    let mut mat = raw;
    rescale_frobenius(&mut mat, T::from_count(n))
        .map_err(|_| Error::Singular("design produced a zero matrix".into()))?;
    SensingMatrix::from_matrix(mat)
}

pub(crate) fn gaussian_design_with<T: Real, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rng: &mut R,
) -> Result<SensingMatrix<T>> {
    if m == 0 || m > n {
        return Err(Error::Dimensions(format!("need 1 <= m <= n, got m={m} n={n}")));
    }
    normalized_from_raw(gaussian_matrix(m, n, rng), n)
}

/// I.i.d. Gaussian `m × n` projection normalised to `‖Φ‖²_F = n`.
pub fn design_gaussian<T: Real>(m: usize, n: usize, rng: RandomStream) -> Result<SensingMatrix<T>> {
    gaussian_design_with(m, n, &mut rng.rng())
}

/// Unnormalised minimiser of `‖Φ̂Ψ − B‖²_F + α‖Φ̂‖²_F`, i.e.
/// `Φ̂ = BΨᵀ(ΨΨᵀ + αI)⁻¹`.
pub fn design_tf1_raw<T: Real>(
    psi: &Dictionary<T>,
    target: &ParsevalTarget<T>,
    alpha: T,
) -> Result<DenseMatrix<T>> {
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if target.nhat() != psi.nhat() {
        return Err(Error::Mismatch(format!(
            "target has {} columns but dictionary has {}",
            target.nhat(),
            psi.nhat()
        )));
    }
    if target.m() > psi.n() {
        return Err(Error::Dimensions(format!(
            "target has {} rows, more than the signal dimension {}",
            target.m(),
            psi.n()
        )));
    }
    let n = psi.n();
    let psi_m = psi.matrix();
    let mut g = psi_m * psi_m.transpose();
    for i in 0..n {
        g[(i, i)] += alpha;
    }
    let eig = SymmetricEigen::new(g.clone()).eigenvalues;
    let lmax = eig.iter().cloned().fold(T::zero(), T::max);
    let lmin = eig.iter().cloned().fold(lmax, T::min);
    if !(lmin > T::zero()) || (lmax / lmin).as_f64() >= COND_LIMIT {
        return Err(Error::Singular(format!(
            "ΨΨᵀ + αI is singular or ill-conditioned (alpha = {alpha})"
        )));
    }
    let chol = Cholesky::new(g)
        .ok_or_else(|| Error::Singular("ΨΨᵀ + αI is not positive definite".into()))?;
    // Φ̂ᵀ = (ΨΨᵀ + αI)⁻¹ Ψ Bᵀ
    let rhs = psi_m * target.matrix().transpose();
    Ok(chol.solve(&rhs).transpose())
}

pub fn design_tf1<T: Real>(
    psi: &Dictionary<T>,
    target: &ParsevalTarget<T>,
    alpha: T,
) -> Result<SensingMatrix<T>> {
    normalized_from_raw(design_tf1_raw(psi, target, alpha)?, psi.n())
}

/// Left singular vectors and singular values of a dictionary, sorted by
/// decreasing singular value. Computing this once lets repeated
/// mode-inversion designs on a fixed dictionary skip the SVD.
#[derive(Clone, Debug)]
pub struct DictionaryModes<T: Real> {
    u: DenseMatrix<T>,
    singular_values: Vec<T>,
}

impl<T: Real> DictionaryModes<T> {
    pub fn new(psi: &Dictionary<T>) -> Self {
        let svd = sorted_svd(psi.matrix().clone(), true, false);
        Self {
            u: svd.u.expect("u requested"),
            singular_values: svd.singular_values.iter().cloned().collect(),
        }
    }

    /// Modes of the canonical basis `Ψ = I_n`, without the SVD.
    pub fn identity(n: usize) -> Self {
        Self {
            u: DenseMatrix::identity(n, n),
            singular_values: vec![T::one(); n],
        }
    }

    pub fn singular_values(&self) -> &[T] {
        &self.singular_values
    }

    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    /// Orthonormal basis for the `m` strongest modes. Where the cut at `m`
    /// splits a group of equal singular values, the retained directions are
    /// drawn uniformly from that group's span.
    fn strongest_modes<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> DenseMatrix<T> {
        let sv = &self.singular_values;
        let n = self.n();
        let tol = sv[0] * T::lit(MODE_TIE);
        let cut = sv[m - 1];
        let tied = |i: usize| (sv[i] - cut).abs() <= tol;
        let mut lo = m - 1;
        while lo > 0 && tied(lo - 1) {
            lo -= 1;
        }
        let mut hi = m;
        while hi < n && tied(hi) {
            hi += 1;
        }
        let mut basis = self.u.columns(0, m).into_owned();
        if hi > m {
            let group = self.u.columns(lo, hi - lo);
            let mix = random_orthonormal_columns::<T, R>(hi - lo, m - lo, rng);
            basis.columns_mut(lo, m - lo).copy_from(&(group * mix));
        }
        basis
    }
}

fn check_tf2<T: Real>(modes: &DictionaryModes<T>, m: usize) -> Result<()> {
    let n = modes.n();
    if m == 0 || m > n {
        return Err(Error::Dimensions(format!("need 1 <= m <= n, got m={m} n={n}")));
    }
    let weakest = modes.singular_values[m - 1];
    if !(weakest.as_f64() > MODE_FLOOR) {
        return Err(Error::Singular(format!(
            "dictionary is rank deficient: singular value {m} is {:.3e}",
            weakest.as_f64()
        )));
    }
    Ok(())
}

pub(crate) fn tf2_raw_with<T: Real, R: Rng + ?Sized>(
    modes: &DictionaryModes<T>,
    m: usize,
    left_factor: LeftFactor,
    rng: &mut R,
) -> Result<DenseMatrix<T>> {
    check_tf2(modes, m)?;
    let basis = modes.strongest_modes(m, rng);
    // row i pairs the i-th weakest kept mode with its inverse gain,
    // matching the ordering Diag(1/λ_m, …, 1/λ_1)
    let mut raw = DenseMatrix::zeros(m, modes.n());
    for i in 0..m {
        let k = m - 1 - i;
        let gain = T::one() / modes.singular_values[k];
        raw.row_mut(i).copy_from(&(basis.column(k).transpose() * gain));
    }
    Ok(match left_factor {
        LeftFactor::Identity => raw,
        LeftFactor::RandomOrthonormal => random_orthonormal_columns::<T, R>(m, m, rng) * raw,
    })
}

/// Unnormalised minimum-energy `Φ̂` subject to `Φ̂ΨΨᵀΦ̂ᵀ = I_m`.
pub fn design_tf2_raw<T: Real>(
    modes: &DictionaryModes<T>,
    m: usize,
    left_factor: LeftFactor,
    rng: RandomStream,
) -> Result<DenseMatrix<T>> {
    tf2_raw_with(modes, m, left_factor, &mut rng.rng())
}

pub fn design_tf2<T: Real>(
    psi: &Dictionary<T>,
    m: usize,
    left_factor: LeftFactor,
    rng: RandomStream,
) -> Result<SensingMatrix<T>> {
    let modes = DictionaryModes::new(psi);
    design_tf2_from_modes(&modes, m, left_factor, rng)
}

pub fn design_tf2_from_modes<T: Real>(
    modes: &DictionaryModes<T>,
    m: usize,
    left_factor: LeftFactor,
    rng: RandomStream,
) -> Result<SensingMatrix<T>> {
    normalized_from_raw(design_tf2_raw(modes, m, left_factor, rng)?, modes.n())
}

/// `‖AᵀA − (m/n̂)I‖²_F` for an `m × n̂` matrix `A`.
pub fn tightness_objective<T: Real>(a: &DenseMatrix<T>) -> T {
    let (m, nhat) = a.shape();
    let c = T::from_count(m) / T::from_count(nhat);
    let gram = a.transpose() * a;
    let mut total = T::zero();
    for j in 0..nhat {
        for i in 0..nhat {
            let d = if i == j { gram[(i, j)] - c } else { gram[(i, j)] };
            total += d * d;
        }
    }
    total
}

/// `‖AAᵀ − (Tr(AAᵀ)/m)I‖_F`: zero exactly when the rows of `A` form a tight frame.
pub fn parseval_defect<T: Real>(a: &DenseMatrix<T>) -> T {
    let m = a.nrows();
    let frame = a * a.transpose();
    let level = frame.trace() / T::from_count(m);
    (frame - DenseMatrix::identity(m, m) * level).norm()
}

/// Sensing energy `‖Φ‖²_F`.
pub fn sensing_cost<T: Real>(phi: &SensingMatrix<T>) -> T {
    frobenius_sq(phi.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{canonical_dictionary, gen_gaussian_dictionary};

    fn dict(n: usize, nhat: usize, seed: u64) -> Dictionary<f64> {
        gen_gaussian_dictionary(n, nhat, RandomStream::new(seed, 11)).unwrap()
    }

    #[test]
    fn square_target_is_orthonormal() {
        let b: ParsevalTarget<f64> = gen_parseval_target(2, 2, RandomStream::new(0, 0)).unwrap();
        let q = b.matrix();
        assert!((q.transpose() * q - DenseMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn target_rows_orthonormal() {
        let b: ParsevalTarget<f64> = gen_parseval_target(40, 80, RandomStream::new(3, 0)).unwrap();
        let defect = (b.matrix() * b.matrix().transpose() - DenseMatrix::identity(40, 40)).norm();
        assert!(defect <= 1e-8);
        assert!(((b.matrix().transpose() * b.matrix()).trace() - 40.0).abs() < 1e-8);
        assert!(gen_parseval_target::<f64>(5, 4, RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn gaussian_design_cost() {
        let phi: SensingMatrix<f64> = design_gaussian(40, 64, RandomStream::new(1, 0)).unwrap();
        assert!((sensing_cost(&phi) - 64.0).abs() < 1e-9);
        let one: SensingMatrix<f64> = design_gaussian(1, 1, RandomStream::new(9, 0)).unwrap();
        assert!((one.matrix()[(0, 0)].abs() - 1.0).abs() < 1e-15);
        assert!(design_gaussian::<f64>(5, 4, RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn normalize_examples() {
        let phi = SensingMatrix::from_matrix(DenseMatrix::<f64>::identity(3, 3) * 2.0).unwrap();
        let out = normalize_sensing(&phi, 3).unwrap();
        assert!((out.matrix() - DenseMatrix::identity(3, 3)).norm() < 1e-15);

        let phi = SensingMatrix::from_matrix(DenseMatrix::<f64>::identity(2, 2)).unwrap();
        let out = normalize_sensing(&phi, 8).unwrap();
        assert!((out.matrix() - DenseMatrix::identity(2, 2) * 2.0).norm() < 1e-15);

        let fixed = SensingMatrix::from_matrix(DenseMatrix::from_row_slice(1, 2, &[1.0, 2.0])).unwrap();
        let out = normalize_sensing(&fixed, 5).unwrap();
        assert!((out.matrix() - fixed.matrix()).norm() < 1e-12);

        let zero = SensingMatrix::from_matrix(DenseMatrix::<f64>::zeros(2, 2)).unwrap();
        assert!(normalize_sensing(&zero, 2).is_err());
    }

    #[test]
    fn tf1_on_identity_ignores_alpha() {
        let psi = canonical_dictionary::<f64>(6).unwrap();
        let b = gen_parseval_target(3, 6, RandomStream::new(4, 0)).unwrap();
        let expected = b.matrix() * (6f64.sqrt() / b.matrix().norm());
        for alpha in [0.0, 0.1, 1.0, 50.0] {
            let phi = design_tf1(&psi, &b, alpha).unwrap();
            assert!((phi.matrix() - &expected).norm() < 1e-12, "alpha {alpha}");
        }
    }

    #[test]
    fn tf1_large_alpha_limit() {
        let psi = dict(8, 10, 2);
        let b = gen_parseval_target(4, 10, RandomStream::new(2, 1)).unwrap();
        let phi = design_tf1(&psi, &b, 1e12).unwrap();
        let limit = b.matrix() * psi.matrix().transpose();
        let limit = &limit * (8f64.sqrt() / limit.norm());
        assert!((phi.matrix() - limit).norm() < 1e-4);
    }

    #[test]
    fn tf1_rejects_singular_gram() {
        // rank-1 dictionary: ΨΨᵀ singular
        let mut m = DenseMatrix::<f64>::zeros(3, 4);
        m.row_mut(0).fill(1.0);
        let psi = Dictionary::from_matrix(m).unwrap();
        let b = gen_parseval_target(2, 4, RandomStream::new(0, 0)).unwrap();
        assert!(matches!(design_tf1(&psi, &b, 0.0), Err(Error::Singular(_))));
        assert!(design_tf1(&psi, &b, 1.0).is_ok());
        assert!(design_tf1(&psi, &b, -1.0).is_err());
    }

    #[test]
    fn tf2_orthonormal_dictionary_gives_scaled_parseval() {
        let psi = canonical_dictionary::<f64>(10).unwrap();
        for lf in [LeftFactor::Identity, LeftFactor::RandomOrthonormal] {
            let phi = design_tf2(&psi, 4, lf, RandomStream::new(1, 2)).unwrap();
            let a = phi.equivalent(&psi).unwrap();
            let frame = &a * a.transpose();
            assert!((frame - DenseMatrix::identity(4, 4) * 2.5).norm() < 1e-8);
        }
    }

    #[test]
    fn tf2_canonical_spreads_over_all_coordinates() {
        // tied spectrum: the kept subspace is random, not the first m axes
        let psi = canonical_dictionary::<f64>(12).unwrap();
        let phi = design_tf2(&psi, 4, LeftFactor::Identity, RandomStream::new(5, 5)).unwrap();
        for j in 4..12 {
            assert!(phi.matrix().column(j).norm() > 1e-6);
        }
    }

    #[test]
    fn tf2_constraint_and_energy() {
        let psi = dict(64, 80, 9);
        let modes = DictionaryModes::new(&psi);
        let raw = design_tf2_raw(&modes, 40, LeftFactor::Identity, RandomStream::new(0, 0)).unwrap();
        let g = psi.matrix() * psi.matrix().transpose();
        let c = &raw * g * raw.transpose();
        assert!((c - DenseMatrix::identity(40, 40)).norm() <= 1e-8);
        let expected: f64 = modes.singular_values()[..40].iter().map(|l| 1.0 / (l * l)).sum();
        assert!((frobenius_sq(&raw) - expected).abs() < 1e-9 * expected);
        let phi = design_tf2(&psi, 40, LeftFactor::Identity, RandomStream::new(0, 0)).unwrap();
        assert!((sensing_cost(&phi) - 64.0).abs() < 1e-9);
    }

    #[test]
    fn tf2_rejects_rank_deficient() {
        let mut m = DenseMatrix::<f64>::zeros(3, 4);
        m[(0, 0)] = 1.0;
        m[(1, 1)] = 1.0;
        let psi = Dictionary::from_matrix(m).unwrap();
        assert!(design_tf2(&psi, 2, LeftFactor::Identity, RandomStream::new(0, 0)).is_ok());
        assert!(matches!(
            design_tf2(&psi, 3, LeftFactor::Identity, RandomStream::new(0, 0)),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn tightness_examples() {
        let b: ParsevalTarget<f64> = gen_parseval_target(40, 80, RandomStream::new(8, 0)).unwrap();
        assert!((tightness_objective(b.matrix()) - 20.0).abs() < 1e-8);
        let id = DenseMatrix::<f64>::identity(5, 5);
        assert!(tightness_objective(&id).abs() < 1e-15);
        assert!(parseval_defect(b.matrix()) < 1e-10);
    }

    #[test]
    fn works_in_single_precision() {
        let psi: Dictionary<f32> = gen_gaussian_dictionary(16, 20, RandomStream::new(1, 0)).unwrap();
        let phi = design_tf2(&psi, 8, LeftFactor::Identity, RandomStream::new(1, 1)).unwrap();
        assert!((sensing_cost(&phi) - 16.0).abs() < 1e-3);
    }
}
