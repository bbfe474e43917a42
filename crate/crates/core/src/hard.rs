//! Hard channel families near the depolarizing channel and numerical
//! checks of the lemmas that control how much a single measurement can
//! learn about them.
//!
//! * Rademacher family: `p(P) = (1 + 4α(P)ε)/d²` with `α = ±1` and
//!   `α(σ(P)) = −α(P)` under a fixed-point-free matching `σ`.
//! * Gaussian family: `p(P) = (1 + 2α̃(P)εd/‖α‖₂)/d²` with `α` i.i.d.
//!   standard normal and `α̃ = α − mean(α)`.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{apply_to_matrix, tv_distance_raw, ChannelSequence, Intertwiner, PauliChannel};
use crate::dense::{haar_unitary, random_unit_vector, CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::pauli::{all_paulis, check_symbolic_n, conjugate_matrix};
use crate::rng::{derive_seed, stream_rng, StreamRng};
use crate::scalar::{RealScalar, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Rademacher,
    Gaussian,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rademacher" => Ok(Family::Rademacher),
            "gaussian" => Ok(Family::Gaussian),
            other => Err(Error::InvalidArgument(format!("unknown family {other:?}"))),
        }
    }
}

/// The matching partner of a Pauli index: toggles the lowest symplectic bit.
pub fn matching(index: usize) -> usize {
    index ^ 1
}

/// `σ` as a table over all `d²` indices.
pub fn make_matching(n: usize) -> Result<Vec<usize>> {
    check_symbolic_n(n)?;
    Ok((0..1usize << (2 * n)).map(matching).collect())
}

/// Sign pattern with `α(σ(P)) = −α(P)`.
pub fn sample_rademacher_signs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i8> {
    let d2 = 1usize << (2 * n);
    let mut alpha = vec![0i8; d2];
    for pair in (0..d2).step_by(2) {
        let s: i8 = if rng.random::<bool>() { 1 } else { -1 };
        alpha[pair] = s;
        alpha[matching(pair)] = -s;
    }
    alpha
}

/// `(1 + 4α(P)ε)/d²`, exact in any scalar type. Requires `0 ≤ ε ≤ 1/4`.
pub fn rademacher_channel<T: Scalar>(n: usize, epsilon: T, alpha: &[i8]) -> Result<PauliChannel<T>> {
    check_symbolic_n(n)?;
    let four = T::from_usize_exact(4);
    if epsilon < T::zero() || epsilon.clone() * four.clone() > T::one() {
        return Err(Error::EpsilonRange { epsilon: epsilon.to_f64_lossy(), range: "0 <= eps <= 1/4".into() });
    }
    let d2 = 1usize << (2 * n);
    if alpha.len() != d2 {
        return Err(Error::DimensionMismatch { expected: d2, actual: alpha.len() });
    }
    if alpha.iter().enumerate().any(|(i, &a)| a.abs() != 1 || alpha[matching(i)] != -a) {
        return Err(Error::InvalidArgument("signs must be ±1 and antisymmetric under the matching".into()));
    }
    let inv = T::one() / T::from_usize_exact(d2);
    let up = (T::one() + four.clone() * epsilon.clone()) * inv.clone();
    let down = (T::one() - four * epsilon) * inv;
    let probs = alpha.iter().map(|&a| if a > 0 { up.clone() } else { down.clone() }).collect();
    PauliChannel::new(n, probs)
}

/// `(1 + 2α̃(P)εd/‖α‖₂)/d²`. Requires `0 ≤ ε ≤ 1/(4d)`.
pub fn gaussian_channel<T: RealScalar>(n: usize, epsilon: T, alpha: &[T]) -> Result<PauliChannel<T>> {
    check_symbolic_n(n)?;
    let d = T::from_usize_exact(1 << n);
    let four = T::from_usize_exact(4);
    if epsilon < T::zero() || epsilon * four * d > T::one() {
        return Err(Error::EpsilonRange { epsilon: epsilon.to_f64_lossy(), range: "0 <= eps <= 1/(4d)".into() });
    }
    let d2 = 1usize << (2 * n);
    if alpha.len() != d2 {
        return Err(Error::DimensionMismatch { expected: d2, actual: alpha.len() });
    }
    let centered = center(alpha);
    let norm = alpha.iter().fold(T::zero(), |a, &b| a + b * b).sqrt();
    let two = T::from_usize_exact(2);
    let d2t = d * d;
    let probs = centered.iter().map(|&a| (T::one() + two * a * epsilon * d / norm) / d2t).collect();
    PauliChannel::new(n, probs)
}

/// `α̃ = α − mean(α)`.
pub fn center<T: RealScalar>(alpha: &[T]) -> Vec<T> {
    let mean = alpha.iter().fold(T::zero(), |a, &b| a + b) / T::from_usize_exact(alpha.len());
    alpha.iter().map(|&a| a - mean).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Alpha {
    Rademacher { signs: Vec<i8> },
    Gaussian { values: Vec<f64> },
}

/// Parameters and sampled randomness of one hard instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardInstanceSpec {
    pub n: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub alpha: Alpha,
}

impl HardInstanceSpec {
    pub fn family(&self) -> Family {
        match self.alpha {
            Alpha::Rademacher { .. } => Family::Rademacher,
            Alpha::Gaussian { .. } => Family::Gaussian,
        }
    }

    pub fn channel(&self) -> Result<PauliChannel<f64>> {
        match &self.alpha {
            Alpha::Rademacher { signs } => rademacher_channel(self.n, self.epsilon, signs),
            Alpha::Gaussian { values } => gaussian_channel(self.n, self.epsilon, values),
        }
    }
}

pub fn check_family_epsilon(family: Family, n: usize, epsilon: f64) -> Result<()> {
    let (ok, range) = match family {
        Family::Rademacher => ((0.0..=0.25).contains(&epsilon), "0 <= eps <= 1/4".to_string()),
        Family::Gaussian => {
            let cap = 1.0 / (4.0 * (1u64 << n) as f64);
            ((0.0..=cap).contains(&epsilon), format!("0 <= eps <= 1/(4d) = {cap}"))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::EpsilonRange { epsilon, range })
    }
}

/// Draws one family member from `seed`.
pub fn sample_hard_channel(
    family: Family,
    n: usize,
    epsilon: f64,
    seed: u64,
) -> Result<(HardInstanceSpec, PauliChannel<f64>)> {
    check_symbolic_n(n)?;
    check_family_epsilon(family, n, epsilon)?;
    let mut rng = stream_rng(seed, 0);
    let alpha = match family {
        Family::Rademacher => Alpha::Rademacher { signs: sample_rademacher_signs(n, &mut rng) },
        Family::Gaussian => {
            Alpha::Gaussian { values: (0..1usize << (2 * n)).map(|_| rng.sample(StandardNormal)).collect() }
        }
    };
    let spec = HardInstanceSpec { n, epsilon, seed, alpha };
    let ch = spec.channel()?;
    Ok((spec, ch))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationReport {
    pub family: Family,
    pub n: usize,
    pub epsilon: f64,
    pub instances: usize,
    pub pair_count: usize,
    pub threshold: f64,
    pub min_tv: f64,
    pub mean_tv: f64,
    pub fraction_below: f64,
    /// Pairs at TV distance exactly zero (identical draws).
    pub degenerate_pairs: usize,
    #[serde(skip)]
    pub tv_values: Vec<f64>,
}

impl SeparationReport {
    pub fn fraction_below(&self, threshold: f64) -> f64 {
        self.tv_values.iter().filter(|&&t| t < threshold).count() as f64 / self.tv_values.len() as f64
    }
}

/// Pairwise TV statistics of the given channels.
pub fn separation_of(
    family: Family,
    epsilon: f64,
    channels: &[PauliChannel<f64>],
    threshold: f64,
    pair_cap: usize,
) -> Result<SeparationReport> {
    if channels.len() < 2 {
        return Err(Error::InvalidArgument("need at least two instances".into()));
    }
    let n = channels[0].n();
    let m = channels.len();
    let mut pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    if pairs.len() > pair_cap {
        // deterministic thinning with a fixed stride
        let stride = pairs.len().div_ceil(pair_cap);
        pairs = pairs.into_iter().step_by(stride).collect();
    }
    let tv_values: Vec<f64> =
        pairs.par_iter().map(|&(i, j)| tv_distance_raw(channels[i].probs(), channels[j].probs())).collect();
    let min_tv = tv_values.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_tv = tv_values.iter().sum::<f64>() / tv_values.len() as f64;
    let mut report = SeparationReport {
        family,
        n,
        epsilon,
        instances: m,
        pair_count: tv_values.len(),
        threshold,
        min_tv,
        mean_tv,
        fraction_below: 0.0,
        degenerate_pairs: tv_values.iter().filter(|&&t| t == 0.0).count(),
        tv_values,
    };
    report.fraction_below = report.fraction_below(threshold);
    Ok(report)
}

pub const DEFAULT_PAIR_CAP: usize = 200_000;

/// Samples `m` independent instances (seeds derived from `seed`) and
/// reports pairwise TV distances against the family's separation threshold:
/// `ε` for Rademacher, `ε/5` for Gaussian.
pub fn separation_statistics(family: Family, n: usize, epsilon: f64, m: usize, seed: u64) -> Result<SeparationReport> {
    if m < 2 {
        return Err(Error::InvalidArgument("need at least two instances".into()));
    }
    let channels: Vec<PauliChannel<f64>> = (0..m as u64)
        .into_par_iter()
        .map(|i| sample_hard_channel(family, n, epsilon, derive_seed(seed, i)).map(|(_, ch)| ch))
        .collect::<Result<_>>()?;
    let threshold = match family {
        Family::Rademacher => epsilon,
        Family::Gaussian => epsilon / 5.0,
    };
    separation_of(family, epsilon, &channels, threshold, DEFAULT_PAIR_CAP)
}

fn check_unit<T: Scalar>(phi: &[Complex<T>]) -> Result<()> {
    let norm_sq = phi.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr());
    if (norm_sq.clone() - T::one()).abs() > T::from_f64_lossy(2e-10) {
        return Err(Error::InvalidArgument(format!("phi has squared norm {}", norm_sq.to_f64_lossy())));
    }
    Ok(())
}

/// `u = ⟨φ| d·P∘N_{m−1}∘…∘N_1∘P(ρ) |φ⟩ − 1`.
pub fn bias_value<T: Scalar>(seq: &ChannelSequence<T>, rho: &DensityMatrix<T>, phi: &[Complex<T>]) -> Result<T> {
    if rho.n() != seq.channel().n() || phi.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), actual: phi.len() });
    }
    check_unit(phi)?;
    let out = seq.apply_matrix(rho.matrix())?;
    Ok(out.expectation(phi).re * T::from_usize_exact(rho.dim()) - T::one())
}

/// `(4ε)^m`, the bound on `|u|` for Rademacher-family channels.
pub fn bias_bound(epsilon: f64, m: usize) -> f64 {
    (4.0 * epsilon).powi(m as i32)
}

/// [`bias_value`] that also enforces `|u| ≤ (4ε)^m + 1e-9`.
pub fn checked_bias_value(
    seq: &ChannelSequence<f64>,
    rho: &DensityMatrix<f64>,
    phi: &[Complex<f64>],
    epsilon: f64,
) -> Result<f64> {
    let u = bias_value(seq, rho, phi)?;
    let bound = bias_bound(epsilon, seq.uses());
    if u.abs() > bound + 1e-9 {
        return Err(Error::BoundViolated(format!("|u| = {} > (4 eps)^m = {bound}", u.abs())));
    }
    Ok(u)
}

/// `c_P = ⟨φ|PρP|φ⟩` for every Pauli, canonical order.
pub fn conjugated_overlaps<T: Scalar>(rho: &DensityMatrix<T>, phi: &[Complex<T>]) -> Result<Vec<T>> {
    Ok(all_paulis(rho.n())?.iter().map(|p| conjugate_matrix(p, rho.matrix()).expectation(phi).re).collect())
}

/// Closed form of `E_α (⟨φ|dP_α(ρ)|φ⟩ − 1)²` over the Rademacher family:
/// `(16ε²/d²) Σ_P (c_P² − c_P c_{σ(P)})`.
pub fn exact_second_moment<T: Scalar>(n: usize, epsilon: T, rho: &DensityMatrix<T>, phi: &[Complex<T>]) -> Result<T> {
    if rho.n() != n || phi.len() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: 1 << n, actual: phi.len() });
    }
    check_unit(phi)?;
    let c = conjugated_overlaps(rho, phi)?;
    let sum = (0..c.len())
        .fold(T::zero(), |acc, p| acc + c[p].clone() * c[p].clone() - c[p].clone() * c[matching(p)].clone());
    let d = T::from_usize_exact(1 << n);
    let value = T::from_usize_exact(16) * epsilon.clone() * epsilon.clone() / (d.clone() * d.clone()) * sum;
    let bound = second_moment_bound(n, epsilon);
    if value > bound.clone() + T::from_f64_lossy(1e-12) {
        return Err(Error::BoundViolated(format!(
            "second moment {} exceeds 32 eps^2/d = {}",
            value.to_f64_lossy(),
            bound.to_f64_lossy()
        )));
    }
    Ok(value)
}

/// `32ε²/d`.
pub fn second_moment_bound<T: Scalar>(n: usize, epsilon: T) -> T {
    T::from_usize_exact(32) * epsilon.clone() * epsilon / T::from_usize_exact(1 << n)
}

/// Bound used for the multi-use second moment: `6(4ε)⁴/d` at `m = 2`,
/// `4m(4ε)^{2m}/d²` for `m ≥ 3`.
pub fn multiuse_bound(n: usize, epsilon: f64, m: usize) -> f64 {
    let d = (1u64 << n) as f64;
    let base = (4.0 * epsilon).powi(2 * m as i32);
    if m == 2 {
        6.0 * base / d
    } else {
        4.0 * m as f64 * base / (d * d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub trials: usize,
    /// `estimate − 3·stderr > bound`.
    pub violated: bool,
}

/// Random unital map: with probability 1/2 a Dirichlet(1) Pauli-mixing
/// channel, otherwise conjugation by a Haar-random unitary.
pub fn random_intertwiner(n: usize, rng: &mut StreamRng) -> Result<Intertwiner<f64>> {
    if rng.random::<bool>() {
        Ok(Intertwiner::PauliMixing(random_dirichlet_channel(n, rng)?))
    } else {
        Intertwiner::unitary(haar_unitary::<f64, _>(1 << n, rng))
    }
}

/// Symmetric Dirichlet(1) draw over the `d²` Pauli atoms.
pub fn random_dirichlet_channel<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PauliChannel<f64>> {
    check_symbolic_n(n)?;
    let draws: Vec<f64> = (0..1usize << (2 * n)).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    PauliChannel::new(n, draws.into_iter().map(|v| v / total).collect())
}

/// Monte-Carlo estimate of `E_α u²` for `m ∈ {2, 3}` channel uses, with
/// `ρ`, `φ` and the intertwiners drawn once from `seed` and held fixed.
pub fn multiuse_second_moment_mc(n: usize, epsilon: f64, m: usize, trials: usize, seed: u64) -> Result<MomentEstimate> {
    if !(2..=3).contains(&m) {
        return Err(Error::InvalidArgument(format!("unsupported use count m = {m}")));
    }
    if trials < 1000 {
        return Err(Error::InvalidArgument("at least 1000 trials required".into()));
    }
    if n == 0 || n > crate::channel::MAX_SEQUENCE_QUBITS {
        return Err(Error::QubitRange { n, min: 1, max: crate::channel::MAX_SEQUENCE_QUBITS });
    }
    check_family_epsilon(Family::Rademacher, n, epsilon)?;
    let mut rng = stream_rng(seed, 0);
    let rho = DensityMatrix::<f64>::random(n, &mut rng)?;
    let phi = random_unit_vector::<f64, _>(1 << n, &mut rng);
    let intertwiners: Vec<Intertwiner<f64>> =
        (0..m - 1).map(|_| random_intertwiner(n, &mut rng)).collect::<Result<_>>()?;
    let squares: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut r = stream_rng(seed, t + 1);
            let signs = sample_rademacher_signs(n, &mut r);
            let ch = rademacher_channel(n, epsilon, &signs)?;
            let seq = ChannelSequence::new(ch, m, intertwiners.clone())?;
            let u = bias_value(&seq, &rho, &phi)?;
            Ok(u * u)
        })
        .collect::<Result<_>>()?;
    let k = squares.len() as f64;
    let mean = squares.iter().sum::<f64>() / k;
    let var = squares.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (k - 1.0);
    let stderr = (var / k).sqrt();
    let bound = multiuse_bound(n, epsilon, m);
    Ok(MomentEstimate { estimate: mean, stderr, bound, trials, violated: mean - 3.0 * stderr > bound })
}

/// `(1/d) Σ_i λ_i u_i²` for a rank-one POVM `M_i = λ_i|φ_i⟩⟨φ_i|` on a
/// Gaussian-family channel, using `λ_i u_i² = (tr(M_i dP(ρ)) − λ_i)²/λ_i`.
/// Fails if the value exceeds `16ε² + 1e-9`.
pub fn povm_second_moment_check(
    instance: &HardInstanceSpec,
    rho: &DensityMatrix<f64>,
    povm: &[CMatrix<f64>],
) -> Result<f64> {
    if instance.family() != Family::Gaussian {
        return Err(Error::InvalidArgument("POVM second-moment check applies to the Gaussian family".into()));
    }
    let ch = instance.channel()?;
    let d = rho.dim();
    if ch.n() != rho.n() || povm.iter().any(|m| m.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, actual: povm.first().map_or(0, CMatrix::dim) });
    }
    let mut total = CMatrix::zeros(d);
    for (i, m) in povm.iter().enumerate() {
        let lambda = m.trace().re;
        if lambda <= 0.0 || (m * m).max_abs_diff(&m.scale(&lambda)) > 1e-10 || !m.is_hermitian(&1e-10) {
            return Err(Error::InvalidPovm(format!("element {i} is not a weighted rank-one projector")));
        }
        total = &total + m;
    }
    if total.max_abs_diff(&CMatrix::identity(d)) > 1e-8 {
        return Err(Error::InvalidPovm("elements do not sum to the identity".into()));
    }
    let out = apply_to_matrix(&ch, rho.matrix())?.scale(&(d as f64));
    let value = povm
        .iter()
        .map(|m| {
            let lambda = m.trace().re;
            let diff = out.trace_product(m).re - lambda;
            diff * diff / lambda
        })
        .sum::<f64>()
        / d as f64;
    let bound = 16.0 * instance.epsilon * instance.epsilon;
    if value > bound + 1e-9 {
        return Err(Error::BoundViolated(format!("POVM second moment {value} > 16 eps^2 = {bound}")));
    }
    Ok(value)
}

/// Fano requirement `(2/3) ln M − ln 2` in nats; negative means vacuous.
pub fn fano_bound(m: f64) -> Result<f64> {
    if m.is_nan() || m < 2.0 {
        return Err(Error::InvalidArgument(format!("Fano bound needs M >= 2, got {m}")));
    }
    Ok(fano_bound_ln(m.ln()))
}

/// Same as [`fano_bound`] taking `ln M`, for family sizes that overflow `f64`.
pub fn fano_bound_ln(ln_m: f64) -> f64 {
    2.0 / 3.0 * ln_m - std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    #[test]
    fn matching_n1() {
        // canonical order I, X, Z, Y
        assert_eq!(make_matching(1).unwrap(), vec![1, 0, 3, 2]);
        for n in 1..=4 {
            let s = make_matching(n).unwrap();
            assert!(s.iter().enumerate().all(|(i, &j)| j != i && s[j] == i));
        }
    }

    #[test]
    fn rademacher_members() {
        let mut rng = stream_rng(4, 0);
        let signs = sample_rademacher_signs(1, &mut rng);
        assert_eq!(signs.iter().map(|&s| i32::from(s)).sum::<i32>(), 0);
        let ch = rademacher_channel(1, 0.1, &signs).unwrap();
        let mut sorted = ch.probs().to_vec();
        sorted.sort_by(f64::total_cmp);
        assert!((sorted[0] - 0.15).abs() < 1e-15 && (sorted[1] - 0.15).abs() < 1e-15);
        assert!((sorted[2] - 0.35).abs() < 1e-15 && (sorted[3] - 0.35).abs() < 1e-15);
        let flat = rademacher_channel(1, 0.0, &signs).unwrap();
        assert_eq!(flat, PauliChannel::uniform(1).unwrap());
        assert!(rademacher_channel(1, 0.3, &signs).is_err());
        let exact = rademacher_channel::<Rational>(1, rational(1, 10), &signs).unwrap();
        assert_eq!(exact.probs().iter().fold(rational(0, 1), |a, b| a + b), rational(1, 1));
    }

    #[test]
    fn gaussian_members() {
        for seed in 0..20 {
            let (spec, ch) = sample_hard_channel(Family::Gaussian, 2, 1.0 / 16.0, seed).unwrap();
            let Alpha::Gaussian { values } = &spec.alpha else { unreachable!() };
            assert!(center(values).iter().sum::<f64>().abs() < 1e-12);
            assert!(ch.probs().iter().all(|&p| (0.0..=2.0 / 16.0).contains(&p)));
        }
        assert!(matches!(sample_hard_channel(Family::Gaussian, 2, 0.07, 0), Err(Error::EpsilonRange { .. })));
    }

    #[test]
    fn identical_seeds_are_degenerate() {
        let (_, a) = sample_hard_channel(Family::Rademacher, 2, 0.05, 9).unwrap();
        let rep = separation_of(Family::Rademacher, 0.05, &[a.clone(), a], 0.05, 10).unwrap();
        assert_eq!((rep.pair_count, rep.degenerate_pairs, rep.min_tv), (1, 1, 0.0));
    }

    #[test]
    fn identity_channel_has_no_bias() {
        let id = PauliChannel::<f64>::identity(2).unwrap();
        let seq = ChannelSequence::new(id, 1, vec![]).unwrap();
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let mut rng = stream_rng(1, 0);
        let phi = random_unit_vector::<f64, _>(4, &mut rng);
        assert!(bias_value(&seq, &rho, &phi).unwrap().abs() < 1e-15);
        let not_unit: Vec<_> = phi.iter().map(|c| c * 2.0).collect();
        assert!(bias_value(&seq, &rho, &not_unit).is_err());
    }

    #[test]
    fn second_moment_of_mixed_state_is_zero() {
        let rho = DensityMatrix::<Rational>::maximally_mixed(1).unwrap();
        let phi = vec![Complex::new(rational(1, 1), rational(0, 1)), Complex::new(rational(0, 1), rational(0, 1))];
        assert_eq!(exact_second_moment(1, rational(1, 10), &rho, &phi).unwrap(), rational(0, 1));
    }

    #[test]
    fn multiuse_with_zero_epsilon() {
        let est = multiuse_second_moment_mc(2, 0.0, 2, 1000, 3).unwrap();
        assert!(est.estimate < 1e-28);
        assert!(multiuse_second_moment_mc(2, 0.05, 4, 1000, 3).is_err());
        assert!(multiuse_second_moment_mc(2, 0.05, 2, 10, 3).is_err());
    }

    #[test]
    fn fano_values() {
        assert!((fano_bound(2.0).unwrap() + std::f64::consts::LN_2 / 3.0).abs() < 1e-15);
        assert!((fano_bound(3f64.exp()).unwrap() - (2.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!(fano_bound(1.5).is_err());
    }
}
