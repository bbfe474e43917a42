//! Pauli channels as probability vectors over canonical Pauli indices.

use serde::{Deserialize, Serialize};

use crate::dense::{CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::pauli::{all_paulis, check_symbolic_n, conjugate_matrix, PauliOperator};
use crate::scalar::{max_of, Scalar};
use crate::walsh::symplectic_transform;

/// Largest qubit count for dense channel sequences.
pub const MAX_SEQUENCE_QUBITS: usize = 3;

const INPUT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel<T> {
    n: usize,
    probs: Vec<T>,
}

fn d_squared(n: usize) -> usize {
    1 << (2 * n)
}

impl<T: Scalar> PauliChannel<T> {
    /// Validates `probs` (length `4^n`, entries ≥ −1e-8, sum within 1e-8 of
    /// one), clamps negative entries to zero and renormalizes.
    pub fn new(n: usize, probs: Vec<T>) -> Result<Self> {
        check_symbolic_n(n)?;
        if probs.len() != d_squared(n) {
            return Err(Error::DimensionMismatch { expected: d_squared(n), actual: probs.len() });
        }
        let tol = T::from_f64_lossy(INPUT_TOLERANCE);
        if let Some(i) = probs.iter().position(|p| !p.is_finite_value()) {
            return Err(Error::NonFinite(i));
        }
        if let Some((i, p)) = probs.iter().enumerate().find(|(_, p)| **p < -tol.clone()) {
            return Err(Error::InvalidProbabilities(format!("entry {i} is {}", p.to_f64_lossy())));
        }
        let clamped: Vec<T> = probs.into_iter().map(|p| max_of(p, T::zero())).collect();
        let sum = clamped.iter().fold(T::zero(), |a, b| a + b.clone());
        if (sum.clone() - T::one()).abs() > tol {
            return Err(Error::InvalidProbabilities(format!("sum is {}", sum.to_f64_lossy())));
        }
        // leave rounding-level drift alone so file round trips are lossless
        let drift = (sum.clone() - T::one()).abs();
        let probs = if drift <= T::from_f64_lossy(1e-14) {
            clamped
        } else {
            clamped.into_iter().map(|p| p / sum.clone()).collect()
        };
        Ok(Self { n, probs })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_symbolic_n(n)?;
        let mut probs = vec![T::zero(); d_squared(n)];
        probs[0] = T::one();
        Ok(Self { n, probs })
    }

    /// The completely depolarizing channel, uniform over all Paulis.
    pub fn uniform(n: usize) -> Result<Self> {
        check_symbolic_n(n)?;
        let w = T::one() / T::from_usize_exact(d_squared(n));
        Ok(Self { n, probs: vec![w; d_squared(n)] })
    }

    /// `(1 − λ)·δ_I + λ·uniform`.
    pub fn depolarizing(n: usize, lambda: T) -> Result<Self> {
        let u = Self::uniform(n)?;
        let mut probs: Vec<T> = u.probs.into_iter().map(|p| p * lambda.clone()).collect();
        probs[0] += T::one() - lambda;
        Self::new(n, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, p: &PauliOperator) -> &T {
        &self.probs[p.index()]
    }

    /// `p̂(P) = Σ_Q p(Q)(−1)^{Q.P}`, with `p̂(I)` pinned to exactly 1.
    pub fn eigenvalues(&self) -> EigenvalueVector<T> {
        let mut values = symplectic_transform(self.n, &self.probs);
        values[0] = T::one();
        EigenvalueVector { n: self.n, values }
    }

    pub fn tv_distance(&self, other: &Self) -> Result<T> {
        tv_distance(self, other)
    }
}

/// `p̂(P) = Σ_Q p(Q)(−1)^{Q.P}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueVector<T> {
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> EigenvalueVector<T> {
    pub fn from_values(n: usize, values: Vec<T>) -> Result<Self> {
        check_symbolic_n(n)?;
        if values.len() != d_squared(n) {
            return Err(Error::DimensionMismatch { expected: d_squared(n), actual: values.len() });
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `q(P) = (1/d²) Σ_Q (−1)^{Q.P} q̂(Q)`; the result may be signed.
    pub fn inverse_transform(&self) -> Vec<T> {
        inverse_transform(self.n, &self.values)
    }
}

pub fn eigenvalues<T: Scalar>(ch: &PauliChannel<T>) -> EigenvalueVector<T> {
    ch.eigenvalues()
}

pub fn inverse_transform<T: Scalar>(n: usize, values: &[T]) -> Vec<T> {
    let scale = T::from_usize_exact(d_squared(n));
    symplectic_transform(n, values).into_iter().map(|v| v / scale.clone()).collect()
}

pub fn tv_distance<T: Scalar>(p: &PauliChannel<T>, q: &PauliChannel<T>) -> Result<T> {
    if p.n != q.n {
        return Err(Error::DimensionMismatch { expected: p.n, actual: q.n });
    }
    Ok(tv_distance_raw(&p.probs, &q.probs))
}

/// Half the ℓ₁ distance between two equal-length vectors.
pub fn tv_distance_raw<T: Scalar>(p: &[T], q: &[T]) -> T {
    let l1 = p.iter().zip(q).fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs());
    l1 / (T::one() + T::one())
}

/// For Pauli channels the diamond distance is exactly twice the TV distance.
pub fn diamond_distance<T: Scalar>(p: &PauliChannel<T>, q: &PauliChannel<T>) -> Result<T> {
    let tv = tv_distance(p, q)?;
    Ok(tv.clone() + tv)
}

pub(crate) fn apply_to_matrix<T: Scalar>(ch: &PauliChannel<T>, m: &CMatrix<T>) -> Result<CMatrix<T>> {
    let mut acc = CMatrix::zeros(m.dim());
    for p in all_paulis(ch.n)? {
        let w = &ch.probs[p.index()];
        if w.is_zero() {
            continue;
        }
        acc = &acc + &conjugate_matrix(&p, m).scale(w);
    }
    Ok(acc)
}

/// `Σ_P p(P) P ρ P`.
pub fn apply_channel<T: Scalar>(ch: &PauliChannel<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if ch.n != rho.n() {
        return Err(Error::DimensionMismatch { expected: ch.n, actual: rho.n() });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho.n(), apply_to_matrix(ch, rho.matrix())?))
}

/// A unital map placed between two channel uses.
#[derive(Debug, Clone, PartialEq)]
pub enum Intertwiner<T> {
    PauliMixing(PauliChannel<T>),
    Unitary(CMatrix<T>),
}

impl<T: Scalar> Intertwiner<T> {
    /// Unitary conjugation; checks `U U† = I` to 1e-10.
    pub fn unitary(u: CMatrix<T>) -> Result<Self> {
        let id = CMatrix::identity(u.dim());
        if (&u * &u.dagger()).max_abs_diff(&id) > T::from_f64_lossy(1e-10) {
            return Err(Error::InvalidArgument("intertwiner is not unitary".into()));
        }
        Ok(Intertwiner::Unitary(u))
    }

    pub fn apply(&self, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        match self {
            Intertwiner::PauliMixing(ch) => apply_to_matrix(ch, m),
            Intertwiner::Unitary(u) => {
                if u.dim() != m.dim() {
                    return Err(Error::DimensionMismatch { expected: m.dim(), actual: u.dim() });
                }
                Ok(&(u * m) * &u.dagger())
            }
        }
    }

    fn dim(&self) -> usize {
        match self {
            Intertwiner::PauliMixing(ch) => ch.dim(),
            Intertwiner::Unitary(u) => u.dim(),
        }
    }
}

/// `m` uses of a channel alternated with `m − 1` unital intertwiners.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSequence<T> {
    channel: PauliChannel<T>,
    intertwiners: Vec<Intertwiner<T>>,
}

impl<T: Scalar> ChannelSequence<T> {
    pub fn new(channel: PauliChannel<T>, m: usize, intertwiners: Vec<Intertwiner<T>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("use count must be at least 1".into()));
        }
        if intertwiners.len() != m - 1 {
            return Err(Error::InvalidArgument(format!(
                "{} intertwiners supplied for {m} channel uses",
                intertwiners.len()
            )));
        }
        if channel.n() > MAX_SEQUENCE_QUBITS {
            return Err(Error::QubitRange { n: channel.n(), min: 1, max: MAX_SEQUENCE_QUBITS });
        }
        let d = channel.dim();
        let mixed = CMatrix::<T>::identity(d).scale(&(T::one() / T::from_usize_exact(d)));
        for (k, nj) in intertwiners.iter().enumerate() {
            if nj.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: nj.dim() });
            }
            if nj.apply(&mixed)?.max_abs_diff(&mixed) > T::from_f64_lossy(1e-10) {
                return Err(Error::InvalidArgument(format!("intertwiner {k} is not unital")));
            }
        }
        Ok(Self { channel, intertwiners })
    }

    pub fn channel(&self) -> &PauliChannel<T> {
        &self.channel
    }

    pub fn uses(&self) -> usize {
        self.intertwiners.len() + 1
    }

    pub fn intertwiners(&self) -> &[Intertwiner<T>] {
        &self.intertwiners
    }

    /// `P ∘ N_{m−1} ∘ P ∘ … ∘ N_1 ∘ P` applied to an arbitrary matrix.
    pub fn apply_matrix(&self, m: &CMatrix<T>) -> Result<CMatrix<T>> {
        let mut cur = apply_to_matrix(&self.channel, m)?;
        for nj in &self.intertwiners {
            cur = apply_to_matrix(&self.channel, &nj.apply(&cur)?)?;
        }
        Ok(cur)
    }
}

pub fn apply_sequence<T: Scalar>(seq: &ChannelSequence<T>, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    if seq.channel.n != rho.n() {
        return Err(Error::DimensionMismatch { expected: seq.channel.n, actual: rho.n() });
    }
    Ok(DensityMatrix::from_matrix_unchecked(rho.n(), seq.apply_matrix(rho.matrix())?))
}

/// On-disk channel format: `{ "n": int, "probs": [4^n floats] }` in canonical index order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChannelFile {
    pub n: usize,
    pub probs: Vec<f64>,
}

impl From<&PauliChannel<f64>> for ChannelFile {
    fn from(ch: &PauliChannel<f64>) -> Self {
        Self { n: ch.n, probs: ch.probs.clone() }
    }
}

impl TryFrom<ChannelFile> for PauliChannel<f64> {
    type Error = Error;
    fn try_from(f: ChannelFile) -> Result<Self> {
        PauliChannel::new(f.n, f.probs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn construction_and_validation() {
        let id = PauliChannel::<f64>::identity(2).unwrap();
        assert_eq!(id.probs()[0], 1.0);
        let mut short = vec![0.0; 16];
        short[0] = 0.9;
        assert!(matches!(PauliChannel::new(2, short), Err(Error::InvalidProbabilities(_))));
        assert!(PauliChannel::new(1, vec![0.5, 0.5]).is_err());
        assert!(PauliChannel::new(1, vec![1.0 + 1e-9, -1e-9, 0.0, 0.0]).is_ok());
        assert!(PauliChannel::new(1, vec![1.1, -0.1, 0.0, 0.0]).is_err());
        let clamped = PauliChannel::new(1, vec![0.5 + 5e-9, 0.5, -5e-9, 0.0]).unwrap();
        assert!(clamped.probs().iter().all(|&p| p >= 0.0));
        assert!((clamped.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_and_uniform_eigenvalues() {
        let id = PauliChannel::<Rational>::identity(2).unwrap();
        assert!(id.eigenvalues().values().iter().all(|v| *v == rational(1, 1)));
        let u = PauliChannel::<Rational>::uniform(2).unwrap();
        let ev = u.eigenvalues();
        assert_eq!(ev.values()[0], rational(1, 1));
        assert!(ev.values()[1..].iter().all(|v| *v == rational(0, 1)));
    }

    #[test]
    fn tv_examples() {
        let id = PauliChannel::<f64>::identity(1).unwrap();
        let u = PauliChannel::<f64>::uniform(1).unwrap();
        assert_eq!(tv_distance(&id, &id).unwrap(), 0.0);
        assert_eq!(tv_distance(&id, &u).unwrap(), 0.75);
        assert_eq!(diamond_distance(&id, &u).unwrap(), 1.5);
        let other = PauliChannel::<f64>::identity(2).unwrap();
        assert!(tv_distance(&id, &other).is_err());
    }

    #[test]
    fn application_examples() {
        let zero = DensityMatrix::<f64>::basis_state(1, 0).unwrap();
        let id = PauliChannel::<f64>::identity(1).unwrap();
        assert_eq!(apply_channel(&id, &zero).unwrap(), zero);
        let u = PauliChannel::<f64>::uniform(1).unwrap();
        assert_eq!(apply_channel(&u, &zero).unwrap(), DensityMatrix::maximally_mixed(1).unwrap());
        let flip = PauliChannel::<f64>::new(1, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(apply_channel(&flip, &zero).unwrap(), DensityMatrix::basis_state(1, 1).unwrap());
    }

    #[test]
    fn sequence_rules() {
        let ch = PauliChannel::<f64>::identity(1).unwrap();
        assert!(ChannelSequence::new(ch.clone(), 3, vec![]).is_err());
        let not_unitary = CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(Intertwiner::unitary(not_unitary).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = DensityMatrix::<f64>::random(1, &mut rng).unwrap();
        let single = ChannelSequence::new(ch.clone(), 1, vec![]).unwrap();
        assert_eq!(apply_sequence(&single, &rho).unwrap(), apply_channel(&ch, &rho).unwrap());
    }

    #[test]
    fn depolarizing_repeated_uses() {
        let eps = 0.1;
        let ch = PauliChannel::<f64>::depolarizing(1, eps).unwrap();
        let seq = ChannelSequence::new(
            ch.clone(),
            5,
            (0..4).map(|_| Intertwiner::PauliMixing(PauliChannel::identity(1).unwrap())).collect(),
        )
        .unwrap();
        let zero = DensityMatrix::<f64>::basis_state(1, 0).unwrap();
        let out = apply_sequence(&seq, &zero).unwrap();
        let keep = (1.0f64 - eps).powi(5);
        let expect = &zero.matrix().scale(&keep) + &CMatrix::identity(2).scale(&((1.0 - keep) / 2.0));
        assert!(out.matrix().max_abs_diff(&expect) < 1e-10);
    }

    #[test]
    fn channel_file_roundtrip() {
        let f: ChannelFile = serde_json::from_str(r#"{"n":1,"probs":[0.7,0.1,0.1,0.1]}"#).unwrap();
        let ch = PauliChannel::try_from(f.clone()).unwrap();
        assert_eq!(ChannelFile::from(&ch), f);
    }
}
