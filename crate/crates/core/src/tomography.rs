//! Non-adaptive Pauli channel tomography with stabilizer-group measurements.
//!
//! For each of the `d + 1` cover groups the learner prepares `ρ_G`, sends it
//! through the channel, measures with `M_G` and averages the characters
//! `(−1)^{Q.P}` of the observed coset labels to estimate every eigenvalue
//! `p̂(P)`, `P ∈ G`. The groups partition the non-identity Paulis, so one
//! pass yields all `d² − 1` estimates. The estimates are inverted back to a
//! (possibly signed) vector and projected onto the simplex.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{inverse_transform, PauliChannel};
use crate::cover::{build_cover, StabilizerGroup};
use crate::error::{Error, Result};
use crate::measurement::{induced_group_distribution, OutcomeDistribution, OutcomeSampler, SampleBatch};
use crate::pauli::symplectic_product_index;
use crate::rng::{derive_seed, stream_rng};
use crate::scalar::Scalar;
use crate::simplex::project_to_simplex;

/// How many measurements to take per group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SampleRule {
    /// `d² ln(2d(d+1)) / (4ε²)`.
    Boxed,
    /// `d² ln(2d(d+1)) / (2ε²)`, enough for a Hoeffding and union bound.
    Proof,
    /// A fixed per-group count.
    Custom(u64),
}

impl std::str::FromStr for SampleRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" | "paper_box" => Ok(SampleRule::Boxed),
            "proof" | "paper_proof" => Ok(SampleRule::Proof),
            other => other
                .strip_prefix("custom:")
                .and_then(|v| v.parse::<f64>().ok())
                .filter(|v| *v >= 1.0 && v.fract() == 0.0)
                .map(|v| SampleRule::Custom(v as u64))
                .ok_or_else(|| Error::InvalidArgument(format!("unknown sample rule {other:?}"))),
        }
    }
}

impl TryFrom<String> for SampleRule {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SampleRule> for String {
    fn from(r: SampleRule) -> Self {
        r.to_string()
    }
}

impl std::fmt::Display for SampleRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleRule::Boxed => write!(f, "box"),
            SampleRule::Proof => write!(f, "proof"),
            SampleRule::Custom(n) => write!(f, "custom:{n}"),
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::EpsilonRange { epsilon, range: "0 < eps <= 1".into() });
    }
    Ok(())
}

/// Per-group measurement count `N_G`.
pub fn required_samples(n: usize, epsilon: f64, rule: SampleRule) -> Result<u64> {
    check_epsilon(epsilon)?;
    let d = (1u64 << n) as f64;
    let base = d * d * (2.0 * d * (d + 1.0)).ln() / (epsilon * epsilon);
    Ok(match rule {
        SampleRule::Boxed => (base / 4.0).ceil() as u64,
        SampleRule::Proof => (base / 2.0).ceil() as u64,
        SampleRule::Custom(count) => {
            if count == 0 {
                return Err(Error::InvalidArgument("custom sample count must be positive".into()));
            }
            count
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TomographyConfig {
    pub n: usize,
    pub epsilon: f64,
    pub rule: SampleRule,
    pub seed: u64,
}

impl TomographyConfig {
    pub fn new(n: usize, epsilon: f64, rule: SampleRule, seed: u64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if n == 0 {
            return Err(Error::QubitRange { n, min: 1, max: crate::cover::MAX_COVER_QUBITS });
        }
        Ok(Self { n, epsilon, rule, seed })
    }

    pub fn samples_per_group(&self) -> Result<u64> {
        required_samples(self.n, self.epsilon, self.rule)
    }
}

/// Estimates `p̂(P)` for `P ∈ G` from observed coset labels. Returned pairs
/// follow the order of `group.elements()`; the identity gets exactly 1.
pub fn estimate_group_eigenvalues(batch: &SampleBatch, group: &StabilizerGroup) -> Result<Vec<(usize, f64)>> {
    let d = group.dim();
    if batch.is_empty() {
        return Err(Error::InvalidArgument("empty sample batch".into()));
    }
    if let Some(&bad) = batch.outcomes.iter().find(|&&o| o as usize >= d) {
        return Err(Error::UnknownOutcome { label: bad as usize, count: d });
    }
    let mut counts = vec![0u64; d];
    for &o in &batch.outcomes {
        counts[o as usize] += 1;
    }
    Ok(estimates_from_counts(&counts, group))
}

pub(crate) fn estimates_from_counts(counts: &[u64], group: &StabilizerGroup) -> Vec<(usize, f64)> {
    let n = group.n();
    let total: u64 = counts.iter().sum();
    group
        .elements()
        .iter()
        .map(|p| {
            if p.is_identity() {
                return (0, 1.0);
            }
            let signed: i64 = group
                .coset_reps()
                .iter()
                .zip(counts)
                .map(
                    |(q, &c)| {
                        if symplectic_product_index(n, q.index(), p.index()) == 1 {
                            -(c as i64)
                        } else {
                            c as i64
                        }
                    },
                )
                .sum();
            (p.index(), signed as f64 / total as f64)
        })
        .collect()
}

/// Inverse character transform of a full set of eigenvalue estimates.
pub fn reconstruct_distribution<T: Scalar>(n: usize, q_hat: &[Option<T>]) -> Result<Vec<T>> {
    let d2 = 1usize << (2 * n);
    if q_hat.len() != d2 {
        return Err(Error::DimensionMismatch { expected: d2, actual: q_hat.len() });
    }
    let missing = q_hat.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::MissingEstimates(missing));
    }
    let values: Vec<T> = q_hat.iter().map(|v| v.clone().expect("checked above")).collect();
    Ok(inverse_transform(n, &values))
}

/// Anything that can be measured: yields the outcome distribution of the
/// stabilizer measurement for a given group.
pub trait ChannelOracle: Sync {
    fn n(&self) -> usize;

    fn group_distribution(&self, group: &StabilizerGroup) -> Result<OutcomeDistribution<f64>>;

    /// Ground truth, when the oracle is a simulation of a known channel.
    fn truth(&self) -> Option<&PauliChannel<f64>> {
        None
    }
}

impl ChannelOracle for PauliChannel<f64> {
    fn n(&self) -> usize {
        PauliChannel::n(self)
    }

    fn group_distribution(&self, group: &StabilizerGroup) -> Result<OutcomeDistribution<f64>> {
        induced_group_distribution(self, group)
    }

    fn truth(&self) -> Option<&PauliChannel<f64>> {
        Some(self)
    }
}

/// Intermediate vectors of one learning run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnerState {
    /// Eigenvalue estimates, canonical index order, `q_hat[0] = 1`.
    pub q_hat: Vec<f64>,
    /// Inverse transform of `q_hat`; may have negative entries.
    pub q_raw: Vec<f64>,
    /// Projection of `q_raw` onto the simplex.
    pub r: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub rule: String,
    pub samples_per_group: u64,
    pub groups: usize,
    pub total_samples: u64,
    /// Set when the rule is `box`: the box constant is half the proof's count.
    pub rule_note: Option<String>,
    pub max_eigenvalue_error: Option<f64>,
    pub tv: Option<f64>,
    pub l2_raw_error: Option<f64>,
    pub l2_projected_error: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub channel: PauliChannel<f64>,
    pub state: LearnerState,
    pub diagnostics: Diagnostics,
}

fn l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Runs the full learner: `(d + 1)·N_G` measurements in total.
pub fn learn_pauli_channel<O: ChannelOracle + ?Sized>(oracle: &O, cfg: &TomographyConfig) -> Result<LearnOutcome> {
    let groups = build_cover(cfg.n)?;
    learn_with_cover(oracle, cfg, &groups)
}

/// Same as [`learn_pauli_channel`] with a prebuilt cover.
pub fn learn_with_cover<O: ChannelOracle + ?Sized>(
    oracle: &O,
    cfg: &TomographyConfig,
    groups: &[StabilizerGroup],
) -> Result<LearnOutcome> {
    let n = cfg.n;
    if oracle.n() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: oracle.n() });
    }
    let per_group = cfg.samples_per_group()?;
    let d2 = 1usize << (2 * n);

    let estimates: Vec<Vec<(usize, f64)>> = groups
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            let dist = oracle.group_distribution(g)?;
            let sampler = OutcomeSampler::new(&dist)?;
            let mut rng = stream_rng(derive_seed(cfg.seed, gi as u64), 0);
            let counts = sampler.counts(per_group, &mut rng);
            Ok(estimates_from_counts(&counts, g))
        })
        .collect::<Result<_>>()?;

    let mut q_hat: Vec<Option<f64>> = vec![None; d2];
    for (idx, v) in estimates.into_iter().flatten() {
        if idx != 0 {
            q_hat[idx] = Some(v);
        }
    }
    q_hat[0] = Some(1.0);
    let q_raw = reconstruct_distribution(n, &q_hat)?;
    let q_hat: Vec<f64> = q_hat.into_iter().map(|v| v.expect("complete")).collect();
    let r = project_to_simplex(&q_raw)?;
    let channel = PauliChannel::new(n, r.clone())?;

    let truth = oracle.truth();
    let diagnostics = Diagnostics {
        rule: cfg.rule.to_string(),
        samples_per_group: per_group,
        groups: groups.len(),
        total_samples: per_group * groups.len() as u64,
        rule_note: (cfg.rule == SampleRule::Boxed)
            .then(|| "box rule uses /(4 eps^2); the Hoeffding bound needs /(2 eps^2)".to_string()),
        max_eigenvalue_error: truth.map(|t| {
            let ev = t.eigenvalues();
            ev.values().iter().zip(&q_hat).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        }),
        tv: truth.map(|t| crate::channel::tv_distance_raw(t.probs(), &r)),
        l2_raw_error: truth.map(|t| l2(t.probs(), &q_raw)),
        l2_projected_error: truth.map(|t| l2(t.probs(), &r)),
    };
    Ok(LearnOutcome { channel, state: LearnerState { q_hat, q_raw, r }, diagnostics })
}
