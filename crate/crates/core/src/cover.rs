//! The `d + 1` mutually unbiased stabilizer groups covering the Pauli group,
//! and the input state / POVM each group induces.
//!
//! Symplectic vectors are packed as `x | (z << n)`, which coincides with the
//! canonical Pauli index.

use num_complex::Complex;
use serde::Serialize;

use crate::dense::{check_dense_n, CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::gf2::{combine_matrices, structure_matrices, FieldSpec, GF2Matrix};
use crate::pauli::{check_symbolic_n, symplectic_product_index, PauliOperator, Phase};
use crate::scalar::Scalar;

/// Largest qubit count accepted by [`build_cover`].
pub const MAX_COVER_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerGroup {
    n: usize,
    generators: GF2Matrix,
    elements: Vec<PauliOperator>,
    signs: Vec<i8>,
    coset_reps: Vec<PauliOperator>,
    complement: Vec<usize>,
}

fn symplectic_packed(n: usize, a: u64, b: u64) -> u8 {
    symplectic_product_index(n, a as usize, b as usize)
}

/// All `2^n` GF(2) combinations of the generator rows; element `c` is the
/// combination with coefficient bits `c`.
pub fn group_elements(n: usize, generators: &GF2Matrix) -> Result<Vec<PauliOperator>> {
    check_symbolic_n(n)?;
    if generators.cols() != 2 * n || generators.rows() != n {
        return Err(Error::DimensionMismatch { expected: n * 2 * n, actual: generators.rows() * generators.cols() });
    }
    let rank = generators.rank();
    if rank < n {
        return Err(Error::DependentGenerators { rank, expected: n });
    }
    (0..1u64 << n).map(|c| PauliOperator::from_index(n, generators.combine_rows(c) as usize)).collect()
}

impl StabilizerGroup {
    /// Builds the group spanned by `n` independent, mutually commuting generator rows.
    pub fn from_generators(n: usize, generators: GF2Matrix) -> Result<Self> {
        let elements = group_elements(n, &generators)?;
        let rows = generators.row_bits();
        for (a, &ra) in rows.iter().enumerate() {
            for &rb in &rows[a + 1..] {
                if symplectic_packed(n, ra, rb) != 0 {
                    return Err(Error::InvalidArgument("generators do not commute".into()));
                }
            }
        }
        // Signs making c ↦ sign(c)·W(element c) a homomorphism: the ordered
        // product of generator matrices, whose phase is ±1 because generators commute.
        let gens: Vec<PauliOperator> =
            rows.iter().map(|&r| PauliOperator::from_index(n, r as usize)).collect::<Result<_>>()?;
        let mut phases = vec![Phase::new(0); elements.len()];
        for c in 1..elements.len() {
            let high = 63 - (c as u64).leading_zeros() as usize;
            let rest = c & !(1 << high);
            let (ph, prod) = elements[rest].multiply(&gens[high])?;
            debug_assert_eq!(prod, elements[c]);
            phases[c] = phases[rest] * ph;
        }
        let signs = phases
            .iter()
            .map(|ph| match ph.exponent() {
                0 => 1,
                2 => -1,
                _ => unreachable!("commuting Hermitian Paulis multiply to a Hermitian Pauli"),
            })
            .collect();
        let complement = symplectic_complement(n, rows)?;
        let mut coset_reps: Vec<PauliOperator> = (0..1u64 << n)
            .map(|c| {
                let v =
                    complement.iter().enumerate().filter(|(j, _)| (c >> j) & 1 == 1).fold(0usize, |a, (_, h)| a ^ h);
                PauliOperator::from_index(n, v)
            })
            .collect::<Result<_>>()?;
        coset_reps.sort_by_key(PauliOperator::index);
        Ok(Self { n, generators, elements, signs, coset_reps, complement })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn generators(&self) -> &GF2Matrix {
        &self.generators
    }

    /// The `d` elements; `elements()[0]` is the identity.
    pub fn elements(&self) -> &[PauliOperator] {
        &self.elements
    }

    /// Sign `s` such that `s·W(P)` is the stabilizer element (never −I for the identity).
    pub fn element_signs(&self) -> &[i8] {
        &self.signs
    }

    /// One representative per coset, sorted by canonical index; `coset_reps()[0]` is I.
    pub fn coset_reps(&self) -> &[PauliOperator] {
        &self.coset_reps
    }

    pub fn contains(&self, p: &PauliOperator) -> bool {
        p.n() == self.n
            && self.generators.row_bits().iter().all(|&g| symplectic_packed(self.n, g, p.index() as u64) == 0)
    }

    /// Outcome label (position in [`Self::coset_reps`]) of the coset containing `p`.
    pub fn coset_label(&self, p: &PauliOperator) -> Result<usize> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: p.n() });
        }
        let rep = self.coset_rep_of(p);
        Ok(self.coset_reps.binary_search_by_key(&rep, PauliOperator::index).expect("representative is listed"))
    }

    /// Canonical index of the representative of `p`'s coset.
    fn coset_rep_of(&self, p: &PauliOperator) -> usize {
        // with ⟨h_j, g_i⟩ = δ_ij the coefficient on h_j is ⟨p, g_j⟩
        self.generators
            .row_bits()
            .iter()
            .zip(&self.complement)
            .filter(|(&g, _)| symplectic_packed(self.n, p.index() as u64, g) == 1)
            .fold(0usize, |acc, (_, &h)| acc ^ h)
    }
}

/// Solves `⟨g_i, h_j⟩ = δ_ij` and then makes the `h_j` pairwise commuting by
/// adding multiples of the generators (symplectic Gram–Schmidt).
fn symplectic_complement(n: usize, gens: &[u64]) -> Result<Vec<usize>> {
    let mask = (1u64 << n) - 1;
    // ⟨g, h⟩ = g_x·h_z + g_z·h_x: row i of the system is g_i with halves swapped
    let swapped: Vec<u64> = gens.iter().map(|&g| ((g & mask) << n) | (g >> n)).collect();
    let system = GF2Matrix::from_row_bits(2 * n, swapped)?;
    let mut hs: Vec<u64> = (0..n)
        .map(|j| system.solve(1 << j).ok_or(Error::DependentGenerators { rank: system.rank(), expected: n }))
        .collect::<Result<_>>()?;
    for j in 0..n {
        for k in j + 1..n {
            if symplectic_packed(n, hs[j], hs[k]) == 1 {
                hs[j] ^= gens[k];
            }
        }
    }
    Ok(hs.into_iter().map(|h| h as usize).collect())
}

/// Free-function form of [`StabilizerGroup::coset_reps`].
pub fn coset_representatives(group: &StabilizerGroup) -> Vec<PauliOperator> {
    group.coset_reps().to_vec()
}

/// Generator matrices `(0 | I)` followed by `(I | A_i)` for `i = 0..d`, with
/// `A_i = Σ_k bit_k(i)·B_k`.
pub fn cover_generators(n: usize) -> Result<Vec<GF2Matrix>> {
    if n == 0 || n > MAX_COVER_QUBITS {
        return Err(Error::QubitRange { n, min: 1, max: MAX_COVER_QUBITS });
    }
    let bs = structure_matrices(&FieldSpec::standard(n)?);
    let z_group = (0..n).map(|k| 1u64 << (n + k)).collect();
    let mut out = vec![GF2Matrix::from_row_bits(2 * n, z_group)?];
    for i in 0..1u64 << n {
        let a = combine_matrices(&bs, i);
        let rows = (0..n).map(|k| (1u64 << k) | (a.row_bits()[k] << n)).collect();
        out.push(GF2Matrix::from_row_bits(2 * n, rows)?);
    }
    Ok(out)
}

pub fn build_cover(n: usize) -> Result<Vec<StabilizerGroup>> {
    cover_generators(n)?.into_iter().map(|g| StabilizerGroup::from_generators(n, g)).collect()
}

/// Input state `ρ_G` and the rank-one POVM `{M_G^Q}` indexed like `coset_reps`.
#[derive(Debug, Clone)]
pub struct StabilizerMeasurement<T> {
    group: StabilizerGroup,
    state: DensityMatrix<T>,
    povm: Vec<CMatrix<T>>,
}

impl<T: Scalar> StabilizerMeasurement<T> {
    pub fn group(&self) -> &StabilizerGroup {
        &self.group
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.state
    }

    pub fn povm(&self) -> &[CMatrix<T>] {
        &self.povm
    }
}

/// `M_G^Q = (1/d) Σ_{P∈G} (−1)^{P.Q} s(P) W(P)`, and `ρ_G = M_G^I`.
pub fn build_measurement<T: Scalar>(group: &StabilizerGroup) -> Result<StabilizerMeasurement<T>> {
    let n = group.n();
    check_dense_n(n)?;
    let d = group.dim();
    let inv_d = T::one() / T::from_usize_exact(d);
    let mats: Vec<CMatrix<T>> = group
        .elements()
        .iter()
        .zip(group.element_signs())
        .map(|(p, &s)| {
            let m = p.to_matrix::<T>()?;
            Ok(if s < 0 { m.scale_complex(&Complex::new(-T::one(), T::zero())) } else { m })
        })
        .collect::<Result<_>>()?;
    let povm: Vec<CMatrix<T>> = group
        .coset_reps()
        .iter()
        .map(|q| {
            let mut acc = CMatrix::zeros(d);
            for (p, m) in group.elements().iter().zip(&mats) {
                acc = if symplectic_product_index(n, p.index(), q.index()) == 1 { &acc - m } else { &acc + m };
            }
            acc.scale(&inv_d)
        })
        .collect();
    let state = DensityMatrix::from_matrix_unchecked(n, povm[0].clone());
    Ok(StabilizerMeasurement { group: group.clone(), state, povm })
}

/// JSON view of a group: generator bit rows, element indices, coset-rep indices.
#[derive(Debug, Clone, Serialize)]
pub struct GroupRecord {
    pub generators: Vec<String>,
    pub elements: Vec<usize>,
    pub coset_reps: Vec<usize>,
}

impl From<&StabilizerGroup> for GroupRecord {
    fn from(g: &StabilizerGroup) -> Self {
        let n = g.n();
        let generators = g
            .generators()
            .row_bits()
            .iter()
            .map(|&r| {
                let bits =
                    |lo: usize| (lo..lo + n).map(|c| if (r >> c) & 1 == 1 { '1' } else { '0' }).collect::<String>();
                format!("{}|{}", bits(0), bits(n))
            })
            .collect();
        Self {
            generators,
            elements: g.elements().iter().map(PauliOperator::index).collect(),
            coset_reps: g.coset_reps().iter().map(PauliOperator::index).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverRecord {
    pub n: usize,
    pub groups: Vec<GroupRecord>,
}

impl CoverRecord {
    pub fn new(n: usize, groups: &[StabilizerGroup]) -> Self {
        Self { n, groups: groups.iter().map(GroupRecord::from).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::all_paulis;

    fn labels(ps: &[PauliOperator]) -> Vec<String> {
        ps.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn single_qubit_cover() {
        let cover = build_cover(1).unwrap();
        let got: Vec<Vec<String>> = cover.iter().map(|g| labels(g.elements())).collect();
        assert_eq!(got, vec![vec!["I", "Z"], vec!["I", "X"], vec!["I", "Y"]]);
        assert_eq!(labels(cover[0].coset_reps()), vec!["I", "X"]);
    }

    #[test]
    fn two_qubit_cover_partitions() {
        let cover = build_cover(2).unwrap();
        assert_eq!(cover.len(), 5);
        let mut seen = [0u32; 16];
        for g in &cover {
            assert_eq!(g.elements().len(), 4);
            for p in g.elements() {
                seen[p.index()] += 1;
            }
        }
        assert_eq!(seen[0], 5);
        assert!(seen[1..].iter().all(|&c| c == 1));
    }

    #[test]
    fn x_generators_give_x_group() {
        let gens = GF2Matrix::from_row_bits(4, vec![0b0001, 0b0010]).unwrap();
        let els = group_elements(2, &gens).unwrap();
        assert_eq!(labels(&els), vec!["II", "XI", "IX", "XX"]);
        let dep = GF2Matrix::from_row_bits(4, vec![0b0001, 0b0001]).unwrap();
        assert!(matches!(group_elements(2, &dep), Err(Error::DependentGenerators { rank: 1, expected: 2 })));
    }

    #[test]
    fn coset_factorization_is_unique() {
        for n in 1..=3 {
            for g in build_cover(n).unwrap() {
                let mut hits = vec![0u32; 1 << (2 * n)];
                for r in g.coset_reps() {
                    for e in g.elements() {
                        hits[r.xor(e).index()] += 1;
                    }
                }
                assert!(hits.iter().all(|&h| h == 1));
                for a in g.coset_reps() {
                    for b in g.coset_reps() {
                        assert_eq!(a.symplectic_product(b).unwrap(), 0);
                    }
                }
                for p in all_paulis(n).unwrap() {
                    let label = g.coset_label(&p).unwrap();
                    assert!(g.contains(&p.xor(&g.coset_reps()[label])));
                }
            }
        }
    }

    #[test]
    fn z_group_measurement_is_computational_basis() {
        let cover = build_cover(1).unwrap();
        let m = build_measurement::<f64>(&cover[0]).unwrap();
        assert_eq!(*m.state(), DensityMatrix::basis_state(1, 0).unwrap());
        assert_eq!(m.povm()[1], *DensityMatrix::<f64>::basis_state(1, 1).unwrap().matrix());
        let plus = build_measurement::<f64>(&cover[1]).unwrap();
        let half = CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert_eq!(*plus.state().matrix(), half);
        let minus = CMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]).unwrap();
        assert_eq!(plus.povm()[1], minus);
    }

    #[test]
    fn sign_fix_needed_for_bell_group() {
        // {II, XX, ZZ, YY}: W(XX)·W(ZZ) = −W(YY)
        let gens = GF2Matrix::from_row_bits(4, vec![0b0011, 0b1100]).unwrap();
        let g = StabilizerGroup::from_generators(2, gens).unwrap();
        assert_eq!(g.element_signs(), &[1, 1, 1, -1]);
        let m = build_measurement::<f64>(&g).unwrap();
        let rho = m.state().matrix();
        assert!((rho * rho).max_abs_diff(rho) < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(build_cover(0).is_err());
        assert!(build_cover(7).is_err());
    }
}
