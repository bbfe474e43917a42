//! Born-rule outcome distributions and seeded sampling.

use rand::distr::Distribution;
use rand_distr::weighted::WeightedAliasIndex;
use serde::{Deserialize, Serialize};

use crate::channel::PauliChannel;
use crate::cover::StabilizerGroup;
use crate::dense::{CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, StreamRng};
use crate::scalar::{max_of, Scalar};

const POVM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution<T> {
    labels: Vec<usize>,
    probs: Vec<T>,
}

impl<T: Scalar> OutcomeDistribution<T> {
    /// Validates nonnegativity and a unit sum to 1e-10.
    pub fn new(labels: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        if labels.len() != probs.len() || probs.is_empty() {
            return Err(Error::DimensionMismatch { expected: labels.len(), actual: probs.len() });
        }
        if probs.iter().any(|p| *p < T::zero()) {
            return Err(Error::InvalidProbabilities("negative outcome probability".into()));
        }
        let sum = probs.iter().fold(T::zero(), |a, b| a + b.clone());
        if (sum.clone() - T::one()).abs() > T::from_f64_lossy(1e-10) {
            return Err(Error::InvalidProbabilities(format!("outcome mass {}", sum.to_f64_lossy())));
        }
        Ok(Self { labels, probs })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.probs.iter().zip(&other.probs).map(|(a, b)| (a.clone() - b.clone()).abs()).fold(T::zero(), max_of)
    }
}

/// `probs[i] = tr(ρ M_i)`; labels are the POVM positions.
pub fn born_distribution<T: Scalar>(rho: &DensityMatrix<T>, povm: &[CMatrix<T>]) -> Result<OutcomeDistribution<T>> {
    let d = rho.dim();
    if povm.is_empty() {
        return Err(Error::InvalidPovm("empty POVM".into()));
    }
    let mut total = CMatrix::zeros(d);
    for (i, m) in povm.iter().enumerate() {
        if m.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: m.dim() });
        }
        if !m.is_hermitian(&T::from_f64_lossy(POVM_TOLERANCE)) || m.hermitian_eigenvalues()[0] < -POVM_TOLERANCE {
            return Err(Error::InvalidPovm(format!("element {i} is not positive semidefinite")));
        }
        total = &total + m;
    }
    let dev = total.max_abs_diff(&CMatrix::identity(d));
    if dev > T::from_f64_lossy(POVM_TOLERANCE) {
        return Err(Error::InvalidPovm(format!("elements sum to identity only within {}", dev.to_f64_lossy())));
    }
    let raw: Vec<T> = povm.iter().map(|m| max_of(rho.matrix().trace_product(m).re, T::zero())).collect();
    let sum = raw.iter().fold(T::zero(), |a, b| a + b.clone());
    if (sum.clone() - T::one()).abs() > T::from_f64_lossy(POVM_TOLERANCE) {
        return Err(Error::InvalidState(format!("Born probabilities sum to {}", sum.to_f64_lossy())));
    }
    let probs = raw.into_iter().map(|p| p / sum.clone()).collect();
    OutcomeDistribution::new((0..povm.len()).collect(), probs)
}

/// `p_G(Q) = Σ_{P∈G} p(Q ⊕ P)` for every coset representative `Q` of `G`.
/// Purely symbolic: no dense matrices are formed.
pub fn induced_group_distribution<T: Scalar>(
    ch: &PauliChannel<T>,
    group: &StabilizerGroup,
) -> Result<OutcomeDistribution<T>> {
    if ch.n() != group.n() {
        return Err(Error::DimensionMismatch { expected: group.n(), actual: ch.n() });
    }
    let probs = group
        .coset_reps()
        .iter()
        .map(|q| group.elements().iter().fold(T::zero(), |acc, p| acc + ch.probs()[q.xor(p).index()].clone()))
        .collect();
    let labels = group.coset_reps().iter().map(|q| q.index()).collect();
    OutcomeDistribution::new(labels, probs)
}

/// `N` outcome positions (indices into the distribution) plus the seed that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub outcomes: Vec<u32>,
    pub seed: u64,
    pub n_outcomes: usize,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn counts(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.n_outcomes];
        for &o in &self.outcomes {
            c[o as usize] += 1;
        }
        c
    }
}

/// Vose alias table over the outcome probabilities.
pub struct OutcomeSampler {
    table: WeightedAliasIndex<f64>,
    n_outcomes: usize,
}

impl OutcomeSampler {
    pub fn new<T: Scalar>(dist: &OutcomeDistribution<T>) -> Result<Self> {
        let weights: Vec<f64> = dist.probs().iter().map(Scalar::to_f64_lossy).collect();
        let table = WeightedAliasIndex::new(weights).map_err(|e| Error::InvalidProbabilities(e.to_string()))?;
        Ok(Self { table, n_outcomes: dist.len() })
    }

    pub fn draw(&self, rng: &mut StreamRng) -> u32 {
        self.table.sample(rng) as u32
    }

    /// Histogram of `count` draws.
    pub fn counts(&self, count: u64, rng: &mut StreamRng) -> Vec<u64> {
        let mut c = vec![0u64; self.n_outcomes];
        for _ in 0..count {
            c[self.table.sample(rng)] += 1;
        }
        c
    }
}

/// `N` i.i.d. draws, deterministic in `(dist, N, seed)`.
pub fn sample_outcomes<T: Scalar>(dist: &OutcomeDistribution<T>, count: usize, seed: u64) -> Result<SampleBatch> {
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let sampler = OutcomeSampler::new(dist)?;
    let mut rng = stream_rng(seed, 0);
    let outcomes = (0..count).map(|_| sampler.draw(&mut rng)).collect();
    Ok(SampleBatch { outcomes, seed, n_outcomes: dist.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_channel;
    use crate::cover::{build_cover, build_measurement};

    fn basis_povm() -> Vec<CMatrix<f64>> {
        vec![
            DensityMatrix::<f64>::basis_state(1, 0).unwrap().into_matrix(),
            DensityMatrix::<f64>::basis_state(1, 1).unwrap().into_matrix(),
        ]
    }

    #[test]
    fn born_examples() {
        let zero = DensityMatrix::<f64>::basis_state(1, 0).unwrap();
        assert_eq!(born_distribution(&zero, &basis_povm()).unwrap().probs(), &[1.0, 0.0]);
        let mixed = DensityMatrix::<f64>::maximally_mixed(1).unwrap();
        assert_eq!(born_distribution(&mixed, &basis_povm()).unwrap().probs(), &[0.5, 0.5]);
        let incomplete = vec![basis_povm()[0].clone()];
        assert!(matches!(born_distribution(&zero, &incomplete), Err(Error::InvalidPovm(_))));
    }

    #[test]
    fn bit_flip_on_z_group() {
        let g = &build_cover(1).unwrap()[0];
        let flip = PauliChannel::<f64>::new(1, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let meas = build_measurement::<f64>(g).unwrap();
        let out = apply_channel(&flip, meas.state()).unwrap();
        assert_eq!(born_distribution(&out, meas.povm()).unwrap().probs(), &[0.0, 1.0]);
        let analytic = induced_group_distribution(&flip, g).unwrap();
        assert_eq!(analytic.probs(), &[0.0, 1.0]);
        assert_eq!(analytic.labels(), &[0, 1]);
    }

    #[test]
    fn degenerate_channels() {
        for g in build_cover(2).unwrap() {
            let id = induced_group_distribution(&PauliChannel::<f64>::identity(2).unwrap(), &g).unwrap();
            assert_eq!(id.probs()[0], 1.0);
            let u = induced_group_distribution(&PauliChannel::<f64>::uniform(2).unwrap(), &g).unwrap();
            assert!(u.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
        }
    }

    #[test]
    fn sampling_contract() {
        let point = OutcomeDistribution::new(vec![0, 1], vec![1.0, 0.0]).unwrap();
        assert!(sample_outcomes(&point, 1000, 3).unwrap().outcomes.iter().all(|&o| o == 0));
        let fair = OutcomeDistribution::new(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let a = sample_outcomes(&fair, 1000, 11).unwrap();
        assert_eq!(a, sample_outcomes(&fair, 1000, 11).unwrap());
        assert!(sample_outcomes(&fair, 0, 11).is_err());
    }

    #[test]
    fn fair_coin_frequency() {
        // binomial sd at N = 1e6 is 5e-4, so 0.002 is four standard deviations
        let fair = OutcomeDistribution::new(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let batch = sample_outcomes(&fair, 1_000_000, 2024).unwrap();
        let freq = batch.counts()[0] as f64 / 1e6;
        assert!((freq - 0.5).abs() < 0.002, "{freq}");
    }
}
