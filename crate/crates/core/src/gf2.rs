//! GF(2) linear algebra and GF(2^n) arithmetic.

use std::fmt;

use crate::error::{Error, Result};

/// Bit matrix with at most 64 columns; row `r` is stored as a `u64`, column
/// `c` at bit `c`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    bits: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64, "GF2Matrix supports at most 64 columns");
        Self { rows, cols, bits: vec![0; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.bits[i] = 1 << i;
        }
        m
    }

    /// Builds a matrix from rows given as bit masks.
    pub fn from_row_bits(cols: usize, rows: Vec<u64>) -> Result<Self> {
        if cols > 64 {
            return Err(Error::InvalidArgument(format!("{cols} columns exceed 64")));
        }
        let mask = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(Error::InvalidArgument("row has bits beyond column count".into()));
        }
        Ok(Self { rows: rows.len(), cols, bits: rows })
    }

    pub fn from_bools(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        let bits =
            rows.iter().map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | (u64::from(b) << j))).collect();
        Self::from_row_bits(cols, bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_bits(&self) -> &[u64] {
        &self.bits
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.bits[r] >> c) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        if v {
            self.bits[r] |= 1 << c;
        } else {
            self.bits[r] &= !(1 << c);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// Entrywise sum (XOR).
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, actual: other.rows * other.cols });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Row vector times matrix: `Σ_r coeffs_r · row_r`.
    pub fn combine_rows(&self, coeffs: u64) -> u64 {
        self.bits.iter().enumerate().filter(|(r, _)| (coeffs >> r) & 1 == 1).fold(0, |acc, (_, row)| acc ^ row)
    }

    /// Reduced row echelon form together with the pivot columns.
    fn echelon(&self) -> (Vec<u64>, Vec<usize>) {
        let mut rows = self.bits.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| (rows[r] >> c) & 1 == 1) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next];
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && (*row >> c) & 1 == 1 {
                    *row ^= pivot_row;
                }
            }
            pivots.push(c);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn det(&self) -> Result<u8> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(u8::from(self.rank() == self.rows))
    }

    /// One solution `v` (as a column bit mask) of `self · v = rhs`, where bit
    /// `r` of `rhs` is the right-hand side of row `r`.
    pub fn solve(&self, rhs: u64) -> Option<u64> {
        // eliminate on the augmented matrix, rhs stored at bit `cols`
        assert!(self.cols < 64, "augmented solve needs a spare column");
        let aug: Vec<u64> =
            self.bits.iter().enumerate().map(|(r, row)| row | (((rhs >> r) & 1) << self.cols)).collect();
        let m = GF2Matrix { rows: self.rows, cols: self.cols + 1, bits: aug };
        let (rows, pivots) = m.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = 0u64;
        for (r, &c) in pivots.iter().enumerate() {
            if (rows[r] >> self.cols) & 1 == 1 {
                v |= 1 << c;
            }
        }
        Some(v)
    }
}

impl fmt::Debug for GF2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GF2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Irreducible polynomials (bit masks, bit k = coefficient of t^k) per degree.
const IRREDUCIBLE: [u32; 12] = [
    0b11,               // t + 1
    0b111,              // t^2 + t + 1
    0b1011,             // t^3 + t + 1
    0b1_0011,           // t^4 + t + 1
    0b10_0101,          // t^5 + t^2 + 1
    0b100_0011,         // t^6 + t + 1
    0b1000_0011,        // t^7 + t + 1
    0b1_0001_1101,      // t^8 + t^4 + t^3 + t^2 + 1
    0b10_0001_0001,     // t^9 + t^4 + 1
    0b100_0000_1001,    // t^10 + t^3 + 1
    0b1000_0000_0101,   // t^11 + t^2 + 1
    0b1_0000_0101_0011, // t^12 + t^6 + t^4 + t + 1
];

/// GF(2^n) realized as GF(2)[t] / (poly) with the polynomial basis 1, t, …, t^{n−1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    n: usize,
    poly: u32,
}

impl FieldSpec {
    /// Field from the built-in polynomial table (1 ≤ n ≤ 12).
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 || n > IRREDUCIBLE.len() {
            return Err(Error::QubitRange { n, min: 1, max: IRREDUCIBLE.len() });
        }
        Self::new(n, IRREDUCIBLE[n - 1])
    }

    pub fn new(n: usize, poly: u32) -> Result<Self> {
        if n == 0 || n > 12 {
            return Err(Error::InvalidField(format!("degree {n} outside 1..=12")));
        }
        if poly >> n != 1 {
            return Err(Error::InvalidField(format!("polynomial {poly:#b} does not have degree {n}")));
        }
        if !is_irreducible(poly) {
            return Err(Error::InvalidField(format!("polynomial {poly:#b} is reducible")));
        }
        Ok(Self { n, poly })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Carry-less product reduced modulo the field polynomial.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a >> self.n == 0 && b >> self.n == 0);
        poly_mod(clmul(a, b), self.poly)
    }
}

fn clmul(a: u32, b: u32) -> u64 {
    (0..32).filter(|i| (b >> i) & 1 == 1).fold(0u64, |acc, i| acc ^ (u64::from(a) << i))
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u64, m: u32) -> u32 {
    let m = u64::from(m);
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a as u32
}

/// Trial division by every polynomial of degree 1..=deg/2.
fn is_irreducible(poly: u32) -> bool {
    let deg = degree(u64::from(poly));
    if deg < 1 {
        return false;
    }
    for dd in 1..=deg / 2 {
        for q in (1u32 << dd)..(1u32 << (dd + 1)) {
            if poly_mod(u64::from(poly), q) == 0 {
                return false;
            }
        }
    }
    true
}

/// `gf2n_mul` as a free function.
pub fn gf2n_mul(a: u32, b: u32, spec: &FieldSpec) -> u32 {
    spec.mul(a, b)
}

/// The matrices `B_k` with `f_i f_j = Σ_k B_k[i][j] f_k` for the polynomial basis `f_i = t^i`.
pub fn structure_matrices(spec: &FieldSpec) -> Vec<GF2Matrix> {
    let n = spec.n();
    let mut bs = vec![GF2Matrix::zeros(n, n); n];
    for i in 0..n {
        for j in 0..n {
            let prod = spec.mul(1 << i, 1 << j);
            for (k, b) in bs.iter_mut().enumerate() {
                if (prod >> k) & 1 == 1 {
                    b.set(i, j, true);
                }
            }
        }
    }
    bs
}

/// `Σ_k bit_k(coeffs) · B_k`.
pub fn combine_matrices(bs: &[GF2Matrix], coeffs: u64) -> GF2Matrix {
    let n = bs.first().map_or(0, GF2Matrix::rows);
    bs.iter()
        .enumerate()
        .filter(|(k, _)| (coeffs >> k) & 1 == 1)
        .fold(GF2Matrix::zeros(n, n), |acc, (_, b)| acc.add(b).expect("structure matrices share a shape"))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Polynomial long division done the schoolbook way on coefficient vectors.
    fn long_division_product(a: u32, b: u32, poly: u32) -> u32 {
        let mut coeffs = [0u8; 32];
        for i in 0..16 {
            for j in 0..16 {
                coeffs[i + j] ^= (((a >> i) & 1) * ((b >> j) & 1)) as u8;
            }
        }
        let dm = 31 - poly.leading_zeros() as usize;
        for top in (dm..32).rev() {
            if coeffs[top] == 1 {
                for k in 0..=dm {
                    coeffs[top - dm + k] ^= ((poly >> k) & 1) as u8;
                }
            }
        }
        (0..dm).fold(0, |acc, k| acc | (u32::from(coeffs[k]) << k))
    }

    #[test]
    fn small_products() {
        let f1 = FieldSpec::standard(1).unwrap();
        assert_eq!(f1.mul(1, 1), 1);
        let f2 = FieldSpec::standard(2).unwrap();
        assert_eq!(f2.mul(2, 2), 3);
        assert_eq!(long_division_product(2, 2, 0b111), 3);
    }

    #[test]
    fn matches_long_division_and_identity() {
        for n in 1..=4 {
            let f = FieldSpec::standard(n).unwrap();
            for a in 0..1u32 << n {
                assert_eq!(f.mul(a, 1), a);
                for b in 0..1u32 << n {
                    assert_eq!(f.mul(a, b), long_division_product(a, b, f.poly()));
                }
            }
        }
    }

    #[test]
    fn table_is_irreducible() {
        for n in 1..=12 {
            FieldSpec::standard(n).unwrap();
        }
        assert!(matches!(FieldSpec::new(2, 0b101), Err(Error::InvalidField(_))));
        assert!(FieldSpec::new(3, 0b111).is_err());
    }

    #[test]
    fn nonzero_elements_have_inverses() {
        for n in 1..=6 {
            let f = FieldSpec::standard(n).unwrap();
            for a in 1..1u32 << n {
                assert!((1..1u32 << n).any(|b| f.mul(a, b) == 1), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn structure_matrices_n1_n2() {
        let b = structure_matrices(&FieldSpec::standard(1).unwrap());
        assert_eq!(b, vec![GF2Matrix::identity(1)]);
        let bs = structure_matrices(&FieldSpec::standard(2).unwrap());
        assert!(bs.iter().all(GF2Matrix::is_symmetric));
        for alpha in 1..4 {
            assert_eq!(combine_matrices(&bs, alpha).det().unwrap(), 1);
        }
    }

    #[test]
    fn nonzero_combinations_invertible() {
        for n in 1..=8 {
            let bs = structure_matrices(&FieldSpec::standard(n).unwrap());
            assert!(bs.iter().all(GF2Matrix::is_symmetric));
            for alpha in 1..1u64 << n {
                assert_eq!(combine_matrices(&bs, alpha).det().unwrap(), 1, "n={n} alpha={alpha}");
            }
        }
    }

    #[test]
    fn det_and_rank() {
        assert_eq!(GF2Matrix::identity(5).det().unwrap(), 1);
        let z = GF2Matrix::zeros(3, 3);
        assert_eq!((z.det().unwrap(), z.rank()), (0, 0));
        let m = GF2Matrix::from_bools(&[vec![true, true], vec![true, false]]).unwrap();
        assert_eq!(m.det().unwrap(), 1);
        let singular = GF2Matrix::from_bools(&[vec![true, true], vec![true, true]]).unwrap();
        assert_eq!(singular.det().unwrap(), 0);
        assert!(matches!(GF2Matrix::zeros(2, 3).det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = GF2Matrix::from_bools(&[vec![true, true, false], vec![false, true, true]]).unwrap();
        let v = m.solve(0b11).unwrap();
        let image: u64 = (0..2).map(|r| u64::from((m.row_bits()[r] & v).count_ones() % 2) << r).sum();
        assert_eq!(image, 0b11);
        let dup = GF2Matrix::from_bools(&[vec![true, false], vec![true, false]]).unwrap();
        assert!(dup.solve(0b01).is_none());
    }
}
