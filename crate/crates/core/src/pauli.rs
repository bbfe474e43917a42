//! Binary-symplectic representation of the n-qubit Pauli group.
//!
//! A Pauli operator is a pair of n-bit strings `(x | z)`; bit `j` of each
//! string refers to qubit `j`. The canonical index is
//! `int(x) + d * int(z)` with `d = 2^n`, so the identity has index 0 and
//! indices run over `0..d²`.
//!
//! Dense realizations use the Hermitian convention
//! `W(x, z) = i^{x·z} X^x Z^z`, with qubit `j` acting on bit `j` of the
//! computational-basis index (qubit 0 is the least significant bit).

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dense::{check_dense_n, CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest qubit count for symbolic (bit-level) operations.
pub const MAX_SYMBOLIC_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliOperator {
    n: usize,
    x: u32,
    z: u32,
}

/// Power of `i` in {0, 1, 2, 3}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub fn new(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex<T: Scalar>(self) -> Complex<T> {
        match self.0 {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        // i^a · i^b = i^{a+b}
        #[allow(clippy::suspicious_arithmetic_impl)]
        Phase::new(u32::from(self.0) + u32::from(rhs.0))
    }
}

pub(crate) fn check_symbolic_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SYMBOLIC_QUBITS {
        return Err(Error::QubitRange { n, min: 1, max: MAX_SYMBOLIC_QUBITS });
    }
    Ok(())
}

impl PauliOperator {
    pub fn new(n: usize, x: u32, z: u32) -> Result<Self> {
        check_symbolic_n(n)?;
        let mask = (1u32 << n) - 1;
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::InvalidArgument(format!("bit strings exceed {n} qubits")));
        }
        Ok(Self { n, x, z })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, x: 0, z: 0 }
    }

    /// Inverse of [`PauliOperator::index`].
    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        check_symbolic_n(n)?;
        let d = 1usize << n;
        if index >= d * d {
            return Err(Error::InvalidArgument(format!("Pauli index {index} >= {}", d * d)));
        }
        Ok(Self { n, x: (index % d) as u32, z: (index / d) as u32 })
    }

    /// Parses a string such as `"XIZ"`; the first character is qubit 0.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        check_symbolic_n(n)?;
        let (mut x, mut z) = (0u32, 0u32);
        for (j, c) in label.chars().enumerate() {
            let (xb, zb) = match c {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                other => return Err(Error::InvalidArgument(format!("unknown Pauli letter {other:?}"))),
            };
            x |= xb << j;
            z |= zb << j;
        }
        Ok(Self { n, x, z })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    pub fn index(&self) -> usize {
        self.x as usize + ((self.z as usize) << self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Symplectic product `x_P·z_Q + z_P·x_Q mod 2`; zero iff the operators commute.
    pub fn symplectic_product(&self, other: &Self) -> Result<u8> {
        self.check_same_n(other)?;
        Ok(symplectic_bits(self.x, self.z, other.x, other.z))
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// Product of the Hermitian realizations: `W(P)·W(Q) = i^k·W(R)`.
    pub fn multiply(&self, other: &Self) -> Result<(Phase, PauliOperator)> {
        self.check_same_n(other)?;
        let r = self.xor(other);
        // W(P)W(Q) = i^{x1·z1 + x2·z2} (-1)^{z1·x2} X^{x3} Z^{z3}
        //          = i^{x1·z1 + x2·z2 + 2 z1·x2 - x3·z3} W(R)
        let k = (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * MAX_SYMBOLIC_QUBITS as u32
            - (r.x & r.z).count_ones();
        Ok((Phase::new(k), r))
    }

    /// Symplectic sum: the Pauli part of the product with the phase dropped.
    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self { n: self.n, x: self.x ^ other.x, z: self.z ^ other.z }
    }

    /// Dense `d×d` realization `i^{x·z} X^x Z^z`.
    pub fn to_matrix<T: Scalar>(&self) -> Result<CMatrix<T>> {
        check_dense_n(self.n)?;
        let d = 1usize << self.n;
        let base = Phase::new((self.x & self.z).count_ones());
        let mut m = CMatrix::zeros(d);
        for b in 0..d as u32 {
            // X^x Z^z |b⟩ = (-1)^{z·b} |b ⊕ x⟩
            let sign = Phase::new(2 * (self.z & b).count_ones());
            m.set((b ^ self.x) as usize, b as usize, (base * sign).to_complex());
        }
        Ok(m)
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: other.n });
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn symplectic_bits(x1: u32, z1: u32, x2: u32, z2: u32) -> u8 {
    (((x1 & z2).count_ones() + (z1 & x2).count_ones()) & 1) as u8
}

/// Symplectic product of two canonical indices.
#[inline]
pub fn symplectic_product_index(n: usize, p: usize, q: usize) -> u8 {
    let mask = (1usize << n) - 1;
    symplectic_bits((p & mask) as u32, (p >> n) as u32, (q & mask) as u32, (q >> n) as u32)
}

/// All `d²` Pauli operators in canonical index order.
pub fn all_paulis(n: usize) -> Result<Vec<PauliOperator>> {
    check_symbolic_n(n)?;
    let d2 = 1usize << (2 * n);
    Ok((0..d2).map(|i| PauliOperator { n, x: (i % (1 << n)) as u32, z: (i >> n) as u32 }).collect())
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n {
            let c = match ((self.x >> j) & 1, (self.z >> j) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `P ρ P`. The phase convention cancels, so the result is exact.
pub fn conjugate_density<T: Scalar>(p: &PauliOperator, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if p.n() != rho.n() {
        return Err(Error::DimensionMismatch { expected: rho.n(), actual: p.n() });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho.n(), conjugate_matrix(p, rho.matrix())))
}

/// `P M P` for an arbitrary matrix, computed as a signed permutation of entries.
pub(crate) fn conjugate_matrix<T: Scalar>(p: &PauliOperator, m: &CMatrix<T>) -> CMatrix<T> {
    let d = m.dim();
    let mut out = CMatrix::zeros(d);
    // (P M P)[a ⊕ x, b ⊕ x] = (-1)^{z·a + z·b} M[a, b]; the i^{x·z} factors cancel.
    for a in 0..d {
        for b in 0..d {
            let v = m.get(a, b).clone();
            if v.is_zero() {
                continue;
            }
            let neg = (p.z() & (a as u32)).count_ones() + (p.z() & (b as u32)).count_ones();
            let v = if neg % 2 == 1 { -v } else { v };
            out.set(a ^ p.x() as usize, b ^ p.x() as usize, v);
        }
    }
    out
}

/// `Σ_P P M P` over the full Pauli group.
pub fn pauli_twirl_sum<T: Scalar>(n: usize, m: &CMatrix<T>) -> Result<CMatrix<T>> {
    let mut acc = CMatrix::zeros(m.dim());
    for p in all_paulis(n)? {
        acc = &acc + &conjugate_matrix(&p, m);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn x_and_z_anticommute() {
        let x = PauliOperator::from_label("X").unwrap();
        let z = PauliOperator::from_label("Z").unwrap();
        assert_eq!(x.symplectic_product(&z).unwrap(), 1);
        for p in all_paulis(2).unwrap() {
            assert_eq!(p.symplectic_product(&PauliOperator::identity(2)).unwrap(), 0);
        }
    }

    #[test]
    fn xz_vs_zx_commute() {
        let a = PauliOperator::from_label("XZ").unwrap();
        let b = PauliOperator::from_label("ZX").unwrap();
        assert_eq!(a.symplectic_product(&b).unwrap(), 0);
        let (ma, mb) = (a.to_matrix::<f64>().unwrap(), b.to_matrix::<f64>().unwrap());
        assert_eq!(&ma * &mb, &mb * &ma);
    }

    #[test]
    fn products_of_single_qubit_paulis() {
        let x = PauliOperator::from_label("X").unwrap();
        let y = PauliOperator::from_label("Y").unwrap();
        let z = PauliOperator::from_label("Z").unwrap();
        let (ph, r) = x.multiply(&z).unwrap();
        assert_eq!((ph.exponent(), r), (3, y));
        let (ph, r) = x.multiply(&y).unwrap();
        assert_eq!((ph.exponent(), r), (1, z));
        for p in all_paulis(3).unwrap() {
            let (ph, r) = p.multiply(&p).unwrap();
            assert_eq!((ph.exponent(), r), (0, PauliOperator::identity(3)));
        }
    }

    #[test]
    fn y_matrix() {
        let y = PauliOperator::new(1, 1, 1).unwrap().to_matrix::<f64>().unwrap();
        let expect = CMatrix::from_rows(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        assert_eq!(y, expect);
        let id = PauliOperator::identity(1).to_matrix::<f64>().unwrap();
        assert_eq!(id, CMatrix::identity(2));
    }

    #[test]
    fn tensor_product_ordering() {
        // x = 01 puts X on qubit 0, the low-order bit: I ⊗ X under kron.
        let p = PauliOperator::new(2, 0b01, 0).unwrap();
        let xm = PauliOperator::from_label("X").unwrap().to_matrix::<f64>().unwrap();
        let expect = CMatrix::identity(2).kron(&xm);
        assert_eq!(p.to_matrix::<f64>().unwrap(), expect);
    }

    #[test]
    fn index_roundtrip_and_identity() {
        assert_eq!(PauliOperator::identity(3).index(), 0);
        for (i, p) in all_paulis(3).unwrap().iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(PauliOperator::from_index(3, i).unwrap(), *p);
        }
    }

    #[test]
    fn bit_flip_conjugation() {
        let x = PauliOperator::from_label("X").unwrap();
        let zero = DensityMatrix::<f64>::basis_state(1, 0).unwrap();
        let one = DensityMatrix::<f64>::basis_state(1, 1).unwrap();
        assert_eq!(conjugate_density(&x, &zero).unwrap(), one);
        let mixed = DensityMatrix::<f64>::maximally_mixed(2).unwrap();
        for p in all_paulis(2).unwrap() {
            assert_eq!(conjugate_density(&p, &mixed).unwrap(), mixed);
        }
    }

    #[test]
    fn twirl_of_zero_state() {
        let zero = DensityMatrix::<f64>::basis_state(1, 0).unwrap();
        let sum = pauli_twirl_sum(1, zero.matrix()).unwrap();
        assert_eq!(sum, CMatrix::identity(2).scale(&2.0));
    }

    #[test]
    fn mismatched_n() {
        let a = PauliOperator::identity(1);
        let b = PauliOperator::identity(2);
        assert!(matches!(a.symplectic_product(&b), Err(Error::DimensionMismatch { .. })));
        assert!(a.multiply(&b).is_err());
        assert!(PauliOperator::identity(7).to_matrix::<f64>().is_err());
    }
}
