//! Small dense complex matrices and density matrices.
//!
//! Sizes here never exceed 64x64 so a flat row-major `Vec` with naive
//! multiplication is all that is needed. Entries are `Complex<T>` for any
//! [`Scalar`] `T`, which keeps Pauli matrices (entries in {0, ±1, ±i}) exact
//! under rational arithmetic.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{RealScalar, Scalar};

pub const MAX_DENSE_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn from_rows(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, actual: data.len() });
        }
        Ok(Self { dim, data })
    }

    /// Real matrix from row-major entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::from_rows(dim, entries.iter().map(|v| Complex::new(v.clone(), T::zero())).collect())
    }

    /// Outer product |v⟩⟨v|.
    pub fn projector(v: &[Complex<T>]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = v[i].clone() * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Complex<T> {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex<T>) {
        self.data[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn scale(&self, s: &T) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|v| v.clone() * s.clone()).collect() }
    }

    pub fn scale_complex(&self, s: &Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|v| v.clone() * s.clone()).collect() }
    }

    pub fn dagger(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self.data[i * self.dim + i].clone())
    }

    /// tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        let d = self.dim;
        let mut acc = Complex::zero();
        for i in 0..d {
            for k in 0..d {
                acc += self.data[i * d + k].clone() * other.data[k * d + i].clone();
            }
        }
        acc
    }

    /// Kronecker product `self ⊗ other`; `other` acts on the low-order index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut out = Self::zeros(d);
        for i in 0..a {
            for j in 0..a {
                let s = &self.data[i * a + j];
                if s.is_zero() {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * d + j * b + l] = s.clone() * other.data[k * b + l].clone();
                    }
                }
            }
        }
        out
    }

    /// ⟨v| self |v⟩.
    pub fn expectation(&self, v: &[Complex<T>]) -> Complex<T> {
        let d = self.dim;
        let mut acc = Complex::zero();
        for (i, vi) in v.iter().enumerate().take(d) {
            let row = self.data[i * d..(i + 1) * d]
                .iter()
                .zip(v)
                .fold(Complex::zero(), |r: Complex<T>, (m, x)| r + m.clone() * x.clone());
            acc += vi.conj() * row;
        }
        acc
    }

    /// Largest absolute difference over the real and imaginary parts of all entries.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let diff = a.clone() - b.clone();
                crate::scalar::max_of(diff.re.abs(), diff.im.abs())
            })
            .fold(T::zero(), crate::scalar::max_of)
    }

    pub fn is_hermitian(&self, tol: &T) -> bool {
        self.max_abs_diff(&self.dagger()) <= *tol
    }

    /// Eigenvalues of the Hermitian part, in ascending order (computed in `f64`).
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let d = self.dim;
        let m = DMatrix::from_fn(d, d, |i, j| {
            let v = &self.data[i * d + j];
            Complex::new(v.re.to_f64_lossy(), v.im.to_f64_lossy())
        });
        let herm = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn to_f64(&self) -> CMatrix<f64> {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| Complex::new(v.re.to_f64_lossy(), v.im.to_f64_lossy())).collect(),
        }
    }
}

impl<T: Scalar> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }
}

impl<T: Scalar> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }
}

impl<T: Scalar> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let prod = a.clone() * rhs.data[k * d + j].clone();
                    out.data[i * d + j] = out.data[i * d + j].clone() + prod;
                }
            }
        }
        out
    }
}

/// A validated quantum state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    n: usize,
    matrix: CMatrix<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity (min eigenvalue ≥ −1e-10).
    pub fn new(n: usize, matrix: CMatrix<T>) -> Result<Self> {
        check_dense_n(n)?;
        let d = 1usize << n;
        if matrix.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: matrix.dim() });
        }
        let tol = T::from_f64_lossy(1e-12);
        if !matrix.is_hermitian(&tol) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = matrix.trace();
        if (tr.re.clone() - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace {} != 1", tr.re.to_f64_lossy())));
        }
        let min_ev = matrix.hermitian_eigenvalues()[0];
        if min_ev < -1e-10 {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_ev}")));
        }
        Ok(Self { n, matrix })
    }

    /// Wraps a matrix without validation. Used for intermediate results of
    /// trace-preserving maps on already-validated states.
    pub(crate) fn from_matrix_unchecked(n: usize, matrix: CMatrix<T>) -> Self {
        Self { n, matrix }
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_dense_n(n)?;
        let d = 1usize << n;
        let inv = T::one() / T::from_usize_exact(d);
        Ok(Self { n, matrix: CMatrix::identity(d).scale(&inv) })
    }

    /// Computational basis state |index⟩⟨index|.
    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_dense_n(n)?;
        let d = 1usize << n;
        if index >= d {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {d}")));
        }
        let mut m = CMatrix::zeros(d);
        m.set(index, index, Complex::one());
        Ok(Self { n, matrix: m })
    }

    /// Pure state |v⟩⟨v| for a unit vector `v`.
    pub fn pure(n: usize, v: &[Complex<T>]) -> Result<Self> {
        check_dense_n(n)?;
        if v.len() != 1 << n {
            return Err(Error::DimensionMismatch { expected: 1 << n, actual: v.len() });
        }
        Self::new(n, CMatrix::projector(v))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }
}

impl<T: RealScalar> DensityMatrix<T>
where
    StandardNormal: rand_distr::Distribution<T>,
{
    /// Random mixed state ρ = GG†/tr(GG†) with G a complex Ginibre matrix.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_dense_n(n)?;
        let d = 1usize << n;
        let g = random_ginibre::<T, R>(d, rng);
        let m = &g * &g.dagger();
        let tr = m.trace().re;
        let mut m = m.scale(&(T::one() / tr));
        // exact Hermitian symmetrization removes rounding asymmetry
        let mt = m.dagger();
        m = (&m + &mt).scale(&T::from_f64_lossy(0.5));
        Ok(Self { n, matrix: m })
    }

    /// Haar-random pure state.
    pub fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let v = random_unit_vector::<T, R>(1 << n, rng);
        Self::pure(n, &v)
    }
}

pub(crate) fn check_dense_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::QubitRange { n, min: 1, max: MAX_DENSE_QUBITS });
    }
    Ok(())
}

pub fn random_ginibre<T: RealScalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix<T>
where
    StandardNormal: rand_distr::Distribution<T>,
{
    let data = (0..d * d).map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    CMatrix { dim: d, data }
}

/// Uniformly random unit vector in ℂ^d.
pub fn random_unit_vector<T: RealScalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<Complex<T>>
where
    StandardNormal: rand_distr::Distribution<T>,
{
    let v: Vec<Complex<T>> =
        (0..d).map(|_| Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    normalize(v)
}

pub fn vector_norm<T: RealScalar>(v: &[Complex<T>]) -> T {
    v.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

fn normalize<T: RealScalar>(v: Vec<Complex<T>>) -> Vec<Complex<T>> {
    let norm = vector_norm(&v);
    v.into_iter().map(|c| c / norm).collect()
}

/// Haar-random unitary: modified Gram–Schmidt on the columns of a Ginibre
/// matrix. Gram–Schmidt fixes the diagonal of R to be positive, which is
/// exactly the phase correction needed for the Haar measure.
pub fn haar_unitary<T: RealScalar, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix<T>
where
    StandardNormal: rand_distr::Distribution<T>,
{
    let g = random_ginibre::<T, R>(d, rng);
    let mut cols: Vec<Vec<Complex<T>>> = (0..d).map(|j| (0..d).map(|i| *g.get(i, j)).collect()).collect();
    for j in 0..d {
        for k in 0..j {
            let proj = (0..d).fold(Complex::zero(), |acc: Complex<T>, i| acc + cols[k][i].conj() * cols[j][i]);
            let (head, tail) = cols.split_at_mut(j);
            for (x, y) in tail[0].iter_mut().zip(&head[k]) {
                *x -= proj * y;
            }
        }
        let c = std::mem::take(&mut cols[j]);
        cols[j] = normalize(c);
    }
    let mut u = CMatrix::zeros(d);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            u.set(i, j, *v);
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_state_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            let rho = DensityMatrix::<f64>::random(n, &mut rng).unwrap();
            DensityMatrix::new(n, rho.matrix().clone()).unwrap();
        }
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary::<f64, _>(8, &mut rng);
        let prod = &u * &u.dagger();
        assert!(prod.max_abs_diff(&CMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn rejects_bad_states() {
        let bad = CMatrix::<f64>::from_real(2, &[0.5, 0.0, 0.0, 0.6]).unwrap();
        assert!(matches!(DensityMatrix::new(1, bad), Err(Error::InvalidState(_))));
        let neg = CMatrix::<f64>::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(1, neg).is_err());
        assert!(DensityMatrix::<f64>::maximally_mixed(7).is_err());
    }

    #[test]
    fn kron_of_identities() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }
}
