//! Invariant suites run by `pauli-tomo verify`.
//!
//! Each suite is a list of named checks; a check records whether it passed
//! and a one-line detail with the measured deviation. The check functions
//! are public so tests can run them at larger sizes.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex;
use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::channel::{apply_channel, inverse_transform, tv_distance_raw, ChannelSequence, PauliChannel};
use crate::cover::{build_cover, build_measurement, StabilizerGroup};
use crate::dense::{random_unit_vector, CMatrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::experiment::VERSION;
use crate::hard::{
    bias_bound, bias_value, exact_second_moment, fano_bound, multiuse_second_moment_mc, povm_second_moment_check,
    rademacher_channel, random_dirichlet_channel, random_intertwiner, sample_hard_channel, sample_rademacher_signs,
    second_moment_bound, separation_statistics, Family,
};
use crate::measurement::{born_distribution, induced_group_distribution, OutcomeSampler};
use crate::pauli::{pauli_twirl_sum, symplectic_product_index, PauliOperator};
use crate::rng::{derive_seed, stream_rng};
use crate::scalar::Rational;
use crate::tomography::{learn_with_cover, SampleRule, TomographyConfig};
use crate::walsh::symplectic_transform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Algebra,
    Cover,
    Measurement,
    Tomography,
    Hard,
}

pub const ALL_SUITES: [Suite; 5] = [Suite::Algebra, Suite::Cover, Suite::Measurement, Suite::Tomography, Suite::Hard];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Cover => "cover",
            Suite::Measurement => "measurement",
            Suite::Tomography => "tomography",
            Suite::Hard => "hard",
        }
    }
}

/// `all` or one suite name.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>> {
    if name == "all" {
        return Ok(ALL_SUITES.to_vec());
    }
    ALL_SUITES.iter().find(|s| s.name() == name).map(|s| vec![*s]).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "unknown suite {name:?}; expected all, algebra, cover, measurement, tomography or hard"
        ))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn within(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self::new(name, value <= tol, format!("max deviation {value:.3e} (tolerance {tol:.0e})"))
    }

    fn from_result(name: impl Into<String>, r: Result<String>) -> Self {
        match r {
            Ok(detail) => Self::new(name, true, detail),
            Err(e) => Self::new(name, false, e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub version: String,
    pub n_max: usize,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteSummary>,
    pub seconds: f64,
}

pub fn run_verify(suites: &[Suite], n_max: usize, seed: u64) -> Result<VerifySummary> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n-max must be at least 1".into()));
    }
    let start = Instant::now();
    let summaries: Vec<SuiteSummary> = suites.iter().map(|&s| run_suite(s, n_max, seed)).collect();
    Ok(VerifySummary {
        version: VERSION.into(),
        n_max,
        seed,
        passed: summaries.iter().all(|s| s.passed),
        suites: summaries,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_suite(suite: Suite, n_max: usize, seed: u64) -> SuiteSummary {
    let start = Instant::now();
    let seed = derive_seed(seed, suite as u64);
    let checks = match suite {
        Suite::Algebra => algebra_suite(n_max.min(4), seed),
        Suite::Cover => cover_suite(n_max.min(4)),
        Suite::Measurement => measurement_suite(n_max.min(3), seed),
        Suite::Tomography => tomography_suite(n_max.min(3), seed),
        Suite::Hard => hard_suite(n_max.min(3), seed),
    };
    SuiteSummary { suite, passed: checks.iter().all(|c| c.passed), checks, seconds: start.elapsed().as_secs_f64() }
}

// ---------------------------------------------------------------- algebra

/// `Σ_P (−1)^{P.Q} = d²·[Q = I]` over all `Q`, in integers.
pub fn character_sum_identity(n: usize) -> Result<()> {
    let d2 = 1usize << (2 * n);
    for q in 0..d2 {
        let s: i64 = (0..d2).map(|p| if symplectic_product_index(n, p, q) == 0 { 1 } else { -1 }).sum();
        let want = if q == 0 { d2 as i64 } else { 0 };
        if s != want {
            return Err(Error::BoundViolated(format!("character sum at Q = {q} is {s}, expected {want}")));
        }
    }
    Ok(())
}

/// Largest `‖Σ_P PρP − d·tr(ρ)·I‖_max` over `states` random density matrices.
pub fn twirl_deviation(n: usize, states: usize, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, 0);
    let d = 1usize << n;
    let mut worst = 0.0f64;
    for _ in 0..states {
        let rho = DensityMatrix::<f64>::random(n, &mut rng)?;
        let lhs = pauli_twirl_sum(n, rho.matrix())?;
        let rhs = CMatrix::identity(d).scale(&(d as f64 * rho.matrix().trace().re));
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    Ok(worst)
}

/// The twirl identity in exact rationals on a fixed non-diagonal Hermitian matrix.
pub fn twirl_identity_exact(n: usize) -> Result<()> {
    let d = 1usize << n;
    let mut m = CMatrix::<Rational>::zeros(d);
    for a in 0..d {
        for b in 0..d {
            let re = Rational::new(BigInt::from((a * 7 + b * 3) % 5), BigInt::from(1 + a + b));
            let im = Rational::new(BigInt::from(a as i64 - b as i64), BigInt::from(3));
            m.set(a, b, Complex::new(re, im));
        }
    }
    let lhs = pauli_twirl_sum(n, &m)?;
    let rhs = CMatrix::identity(d).scale(&(m.trace().re * Rational::from_integer(BigInt::from(d))));
    // the anti-Hermitian part averages to tr(imag)·I, which is zero here
    if lhs != rhs {
        return Err(Error::BoundViolated("exact twirl identity fails".into()));
    }
    Ok(())
}

/// Symbolic products and commutation agree with dense matrices on `pairs` random pairs.
pub fn multiplication_consistency(n: usize, pairs: usize, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, 1);
    let d2 = 1usize << (2 * n);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let p = PauliOperator::from_index(n, rng.random_range(0..d2))?;
        let q = PauliOperator::from_index(n, rng.random_range(0..d2))?;
        let (phase, r) = p.multiply(&q)?;
        let (mp, mq) = (p.to_matrix::<f64>()?, q.to_matrix::<f64>()?);
        let lhs = &mp * &mq;
        worst = worst.max(lhs.max_abs_diff(&r.to_matrix::<f64>()?.scale_complex(&phase.to_complex())));
        let comm = &lhs - &(&mq * &mp);
        let dense_commute = comm.max_abs_diff(&CMatrix::zeros(1 << n)) < 1e-12;
        if dense_commute != p.commutes_with(&q)? {
            return Err(Error::BoundViolated(format!("commutation of {p} and {q} disagrees with matrices")));
        }
    }
    Ok(worst)
}

/// Largest relative violation of `d·‖p − q‖₂ = ‖p̂ − q̂‖₂` over random vectors.
pub fn parseval_deviation(n: usize, pairs: usize, seed: u64) -> f64 {
    let mut rng = stream_rng(seed, 2);
    let d2 = 1usize << (2 * n);
    let d = (1usize << n) as f64;
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let p: Vec<f64> = (0..d2).map(|_| rng.random::<f64>()).collect();
        let q: Vec<f64> = (0..d2).map(|_| rng.random::<f64>()).collect();
        let (ph, qh) = (symplectic_transform(n, &p), symplectic_transform(n, &q));
        let lhs = d * p.iter().zip(&q).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let rhs = ph.iter().zip(&qh).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        worst = worst.max((lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE));
    }
    worst
}

/// `inverse_transform(eigenvalues(p)) = p` in rationals.
pub fn transform_roundtrip_exact(n: usize, seed: u64) -> Result<()> {
    let ch = random_rational_channel(n, seed)?;
    if inverse_transform(n, ch.eigenvalues().values()) != ch.probs() {
        return Err(Error::BoundViolated("exact transform round trip fails".into()));
    }
    Ok(())
}

/// Channel with random integer weights, normalized exactly.
pub fn random_rational_channel(n: usize, seed: u64) -> Result<PauliChannel<Rational>> {
    let mut rng = stream_rng(seed, 3);
    let w: Vec<i64> = (0..1usize << (2 * n)).map(|_| rng.random_range(1..100)).collect();
    let total: i64 = w.iter().sum();
    PauliChannel::new(n, w.into_iter().map(|v| Rational::new(BigInt::from(v), BigInt::from(total))).collect())
}

fn algebra_suite(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(format!("character sum n={n}"), character_sum_identity(n).map(|_| "exact".into())));
        out.push(match twirl_deviation(n, 50, derive_seed(seed, n as u64)) {
            Ok(v) => Check::within(format!("twirl identity n={n}"), v, 1e-10),
            Err(e) => Check::new(format!("twirl identity n={n}"), false, e.to_string()),
        });
        out.push(Check::from_result(format!("exact twirl n={n}"), twirl_identity_exact(n).map(|_| "exact".into())));
        out.push(match multiplication_consistency(n, 50, derive_seed(seed, n as u64)) {
            Ok(v) => Check::within(format!("products vs matrices n={n}"), v, 1e-12),
            Err(e) => Check::new(format!("products vs matrices n={n}"), false, e.to_string()),
        });
        out.push(Check::within(
            format!("parseval n={n}"),
            parseval_deviation(n, 100, derive_seed(seed, n as u64)),
            1e-9,
        ));
        out.push(Check::from_result(
            format!("exact transform round trip n={n}"),
            transform_roundtrip_exact(n, derive_seed(seed, n as u64)).map(|_| "exact".into()),
        ));
    }
    out
}

// ------------------------------------------------------------------ cover

/// Partition, group size, commutant and coset factorization of the cover.
pub fn cover_structure(n: usize) -> Result<Vec<StabilizerGroup>> {
    let groups = build_cover(n)?;
    let d = 1usize << n;
    let d2 = d * d;
    if groups.len() != d + 1 {
        return Err(Error::BoundViolated(format!("{} groups, expected {}", groups.len(), d + 1)));
    }
    let mut owner = vec![usize::MAX; d2];
    for (gi, g) in groups.iter().enumerate() {
        if g.elements().len() != d || !g.elements()[0].is_identity() {
            return Err(Error::BoundViolated(format!("group {gi} has {} elements", g.elements().len())));
        }
        for p in &g.elements()[1..] {
            if owner[p.index()] != usize::MAX {
                return Err(Error::BoundViolated(format!("{p} lies in groups {} and {gi}", owner[p.index()])));
            }
            owner[p.index()] = gi;
        }
        let commutant: Vec<usize> =
            (0..d2).filter(|&q| g.elements().iter().all(|p| symplectic_product_index(n, p.index(), q) == 0)).collect();
        let mut members: Vec<usize> = g.elements().iter().map(PauliOperator::index).collect();
        members.sort_unstable();
        if commutant != members {
            return Err(Error::BoundViolated(format!("commutant of group {gi} differs from the group")));
        }
        // P = rep ⊕ g for exactly one pair
        let mut hits = vec![0u8; d2];
        for r in g.coset_reps() {
            for e in g.elements() {
                hits[r.index() ^ e.index()] += 1;
            }
            for s in g.coset_reps() {
                if !r.commutes_with(s)? {
                    return Err(Error::BoundViolated(format!("coset reps {r} and {s} anticommute")));
                }
            }
        }
        if hits.iter().any(|&h| h != 1) || !g.coset_reps()[0].is_identity() {
            return Err(Error::BoundViolated(format!("coset reps of group {gi} do not factor the Pauli group")));
        }
        for q in 0..d2 {
            let s: i64 =
                g.elements().iter().map(|p| if symplectic_product_index(n, p.index(), q) == 0 { 1 } else { -1 }).sum();
            let want = if g.contains(&PauliOperator::from_index(n, q)?) { d as i64 } else { 0 };
            if s != want {
                return Err(Error::BoundViolated(format!("group character sum of group {gi} at Q = {q} is {s}")));
            }
        }
    }
    if owner[0] != usize::MAX || owner[1..].contains(&usize::MAX) {
        return Err(Error::BoundViolated("cover does not partition the non-identity Paulis".into()));
    }
    Ok(groups)
}

/// Largest deviation among `Σ_Q M^Q = I`, `(M^Q)² = M^Q`, `tr M^Q = 1`,
/// `ρ_G² = ρ_G`, `tr ρ_G = 1`, and `M^I = ρ_G` over all groups.
pub fn povm_identity_deviation(groups: &[StabilizerGroup]) -> Result<f64> {
    let mut worst = 0.0f64;
    for g in groups {
        let meas = build_measurement::<f64>(g)?;
        let d = g.dim();
        let mut total = CMatrix::zeros(d);
        for m in meas.povm() {
            worst = worst.max((m * m).max_abs_diff(m)).max((m.trace().re - 1.0).abs()).max(m.trace().im.abs());
            total = &total + m;
        }
        worst = worst.max(total.max_abs_diff(&CMatrix::identity(d)));
        let rho = meas.state().matrix();
        worst = worst.max((rho * rho).max_abs_diff(rho)).max((rho.trace().re - 1.0).abs());
        worst = worst.max(rho.max_abs_diff(&meas.povm()[0]));
    }
    Ok(worst)
}

/// Largest `|tr(M_G^Q M_{G'}^{Q'}) − 1/d|` over distinct groups.
pub fn mutual_unbiasedness_deviation(groups: &[StabilizerGroup]) -> Result<f64> {
    let povms: Vec<Vec<CMatrix<f64>>> =
        groups.iter().map(|g| build_measurement::<f64>(g).map(|m| m.povm().to_vec())).collect::<Result<_>>()?;
    let d = groups[0].dim() as f64;
    let mut worst = 0.0f64;
    for (i, a) in povms.iter().enumerate() {
        for b in &povms[i + 1..] {
            for ma in a {
                for mb in b {
                    worst = worst.max((ma.trace_product(mb).re - 1.0 / d).abs());
                }
            }
        }
    }
    Ok(worst)
}

fn cover_suite(n_max: usize) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        match cover_structure(n) {
            Ok(groups) => {
                out.push(Check::new(
                    format!("cover structure n={n}"),
                    true,
                    format!("{} groups of size {}", groups.len(), 1 << n),
                ));
                out.push(match povm_identity_deviation(&groups) {
                    Ok(v) => Check::within(format!("projector identities n={n}"), v, 1e-12),
                    Err(e) => Check::new(format!("projector identities n={n}"), false, e.to_string()),
                });
                if n <= 2 {
                    out.push(match mutual_unbiasedness_deviation(&groups) {
                        Ok(v) => Check::within(format!("mutual unbiasedness n={n}"), v, 1e-10),
                        Err(e) => Check::new(format!("mutual unbiasedness n={n}"), false, e.to_string()),
                    });
                }
            }
            Err(e) => out.push(Check::new(format!("cover structure n={n}"), false, e.to_string())),
        }
    }
    out
}

// ------------------------------------------------------------ measurement

/// Largest gap between the coset formula and the dense Born pipeline,
/// over all groups and `channels` Dirichlet-random channels.
pub fn oracle_equivalence_deviation(n: usize, channels: usize, seed: u64) -> Result<f64> {
    let groups = build_cover(n)?;
    let meas: Vec<_> = groups.iter().map(build_measurement::<f64>).collect::<Result<_>>()?;
    let mut rng = stream_rng(seed, 4);
    let mut worst = 0.0f64;
    for _ in 0..channels {
        let ch = random_dirichlet_channel(n, &mut rng)?;
        for (g, m) in groups.iter().zip(&meas) {
            let analytic = induced_group_distribution(&ch, g)?;
            let dense = born_distribution(&apply_channel(&ch, m.state())?, m.povm())?;
            worst = worst.max(analytic.max_abs_diff(&dense));
        }
    }
    Ok(worst)
}

/// Chi-square p-value of `draws` alias samples against a random distribution.
pub fn sampling_chi_square(outcomes: usize, draws: u64, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, 5);
    let w: Vec<f64> = (0..outcomes).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = w.iter().sum();
    let probs: Vec<f64> = w.iter().map(|v| v / total).collect();
    let dist = crate::measurement::OutcomeDistribution::new((0..outcomes).collect(), probs.clone())?;
    let counts = OutcomeSampler::new(&dist)?.counts(draws, &mut stream_rng(seed, 6));
    let stat: f64 = counts
        .iter()
        .zip(&probs)
        .map(|(&c, &p)| {
            let e = p * draws as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let chi = ChiSquared::new((outcomes - 1) as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(chi.sf(stat))
}

fn measurement_suite(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(match oracle_equivalence_deviation(n, 50, derive_seed(seed, n as u64)) {
            Ok(v) => Check::within(format!("coset formula vs Born n={n}"), v, 1e-10),
            Err(e) => Check::new(format!("coset formula vs Born n={n}"), false, e.to_string()),
        });
    }
    for (i, k) in [2usize, 8, 64].into_iter().enumerate() {
        out.push(match sampling_chi_square(k, 100_000, derive_seed(seed, 100 + i as u64)) {
            Ok(p) => Check::new(format!("alias sampling chi-square k={k}"), p > 1e-3, format!("p-value {p:.4}")),
            Err(e) => Check::new(format!("alias sampling chi-square k={k}"), false, e.to_string()),
        });
    }
    out
}

// ------------------------------------------------------------- tomography

/// `Σ_Q p_G(Q)(−1)^{Q.P} = p̂(P)` for every group and `P ∈ G`, exactly.
pub fn estimator_unbiasedness_exact(n: usize, seed: u64) -> Result<()> {
    let ch = random_rational_channel(n, seed)?;
    let eig = ch.eigenvalues();
    for g in build_cover(n)? {
        let dist = induced_group_distribution(&ch, &g)?;
        for p in g.elements() {
            let mut mean = Rational::from_integer(BigInt::from(0));
            for (label, prob) in dist.labels().iter().zip(dist.probs()) {
                if symplectic_product_index(n, *label, p.index()) == 0 {
                    mean += prob.clone();
                } else {
                    mean -= prob.clone();
                }
            }
            if mean != eig.values()[p.index()] {
                return Err(Error::BoundViolated(format!("estimator biased at {p}")));
            }
        }
    }
    Ok(())
}

/// Learner runs with known truths; checks success rate, the projection
/// contraction `‖r − p‖₂ ≤ ‖q − p‖₂` and `2·TV ≤ d·‖r − p‖₂` on every trial.
pub fn learner_trials(n: usize, epsilon: f64, rule: SampleRule, trials: usize, seed: u64) -> Result<(usize, String)> {
    let groups = build_cover(n)?;
    let d = (1usize << n) as f64;
    let mut successes = 0;
    for t in 0..trials {
        let s = derive_seed(seed, t as u64);
        let truth = random_dirichlet_channel(n, &mut stream_rng(s, 1))?;
        let outcome = learn_with_cover(&truth, &TomographyConfig::new(n, epsilon, rule, s)?, &groups)?;
        let diag = &outcome.diagnostics;
        let (raw, proj) = (diag.l2_raw_error.unwrap_or(f64::NAN), diag.l2_projected_error.unwrap_or(f64::NAN));
        if proj.is_nan() || proj > raw + 1e-12 {
            return Err(Error::BoundViolated(format!("trial {t}: projection increased l2 error {raw} -> {proj}")));
        }
        let tv = tv_distance_raw(truth.probs(), outcome.channel.probs());
        if 2.0 * tv > d * proj + 1e-12 {
            return Err(Error::BoundViolated(format!("trial {t}: l1 {} exceeds d*l2 {}", 2.0 * tv, d * proj)));
        }
        if tv <= epsilon {
            successes += 1;
        }
    }
    Ok((successes, format!("{successes}/{trials} trials within eps = {epsilon}")))
}

fn tomography_suite(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.push(Check::from_result(
            format!("estimator unbiasedness n={n}"),
            estimator_unbiasedness_exact(n, derive_seed(seed, n as u64)).map(|_| "exact".into()),
        ));
        let id = PauliChannel::<f64>::identity(n).and_then(|truth| {
            let groups = build_cover(n)?;
            learn_with_cover(&truth, &TomographyConfig::new(n, 0.1, SampleRule::Custom(100), seed)?, &groups)
        });
        out.push(match id {
            Ok(o) => {
                let tv = o.diagnostics.tv.unwrap_or(f64::NAN);
                Check::within(format!("identity truth recovered n={n}"), tv, 1e-12)
            }
            Err(e) => Check::new(format!("identity truth recovered n={n}"), false, e.to_string()),
        });
    }
    let n = n_max.min(2);
    let trials = 20;
    out.push(match learner_trials(n, 0.1, SampleRule::Proof, trials, seed) {
        Ok((s, detail)) => Check::new(format!("learner guarantee n={n}"), 3 * s >= 2 * trials, detail),
        Err(e) => Check::new(format!("learner guarantee n={n}"), false, e.to_string()),
    });
    out
}

// ------------------------------------------------------------------- hard

/// Draws `tuples` random (instance, ρ, φ, intertwiners) and counts
/// violations of `|u| ≤ (4ε)^m + 1e-9`. Returns (violations, max |u|/bound).
pub fn bias_violations(n: usize, epsilon: f64, m: usize, tuples: usize, seed: u64) -> Result<(usize, f64)> {
    let bound = bias_bound(epsilon, m);
    let mut violations = 0;
    let mut worst = 0.0f64;
    for t in 0..tuples {
        let mut rng = stream_rng(derive_seed(seed, t as u64), m as u64);
        let signs = sample_rademacher_signs(n, &mut rng);
        let ch = rademacher_channel(n, epsilon, &signs)?;
        let rho = if rng.random::<bool>() {
            DensityMatrix::<f64>::random(n, &mut rng)?
        } else {
            DensityMatrix::random_pure(n, &mut rng)?
        };
        let phi = random_unit_vector::<f64, _>(1 << n, &mut rng);
        let ints = (0..m - 1).map(|_| random_intertwiner(n, &mut rng)).collect::<Result<_>>()?;
        let u = bias_value(&ChannelSequence::new(ch, m, ints)?, &rho, &phi)?;
        if u.abs() > bound + 1e-9 {
            violations += 1;
        }
        worst = worst.max(u.abs() / bound);
    }
    Ok((violations, worst))
}

/// Largest ratio of the closed-form second moment to `32ε²/d` over random inputs.
pub fn second_moment_ratio(n: usize, epsilon: f64, inputs: usize, seed: u64) -> Result<f64> {
    let mut rng = stream_rng(seed, 7);
    let bound = second_moment_bound(n, epsilon);
    let mut worst = 0.0f64;
    for _ in 0..inputs {
        let rho = if rng.random::<bool>() {
            DensityMatrix::<f64>::random(n, &mut rng)?
        } else {
            DensityMatrix::random_pure(n, &mut rng)?
        };
        let phi = random_unit_vector::<f64, _>(1 << n, &mut rng);
        worst = worst.max(exact_second_moment(n, epsilon, &rho, &phi)? / bound);
    }
    Ok(worst)
}

/// `E_α u²` by listing every matched sign pattern, in `f64`.
pub fn second_moment_by_enumeration(
    n: usize,
    epsilon: f64,
    rho: &DensityMatrix<f64>,
    phi: &[Complex<f64>],
) -> Result<f64> {
    let pairs = 1usize << (2 * n - 1);
    if pairs > 16 {
        return Err(Error::InvalidArgument("enumeration limited to n = 1 and n = 2".into()));
    }
    let mut total = 0.0;
    for mask in 0..1usize << pairs {
        let signs: Vec<i8> = (0..2 * pairs)
            .map(|i| {
                let s = if (mask >> (i / 2)) & 1 == 1 { -1 } else { 1 };
                if i % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        let seq = ChannelSequence::new(rademacher_channel(n, epsilon, &signs)?, 1, vec![])?;
        total += bias_value(&seq, rho, phi)?.powi(2);
    }
    Ok(total / (1usize << pairs) as f64)
}

fn hard_suite(n_max: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let eps = 0.05;
    for n in 1..=n_max {
        for m in 1..=3 {
            let name = format!("bias bound n={n} m={m}");
            out.push(match bias_violations(n, eps, m, 100, derive_seed(seed, (n * 10 + m) as u64)) {
                Ok((v, r)) => Check::new(name, v == 0, format!("{v} violations, max |u|/(4 eps)^m = {r:.3}")),
                Err(e) => Check::new(name, false, e.to_string()),
            });
        }
        let name = format!("second moment bound n={n}");
        out.push(match second_moment_ratio(n, eps, 100, derive_seed(seed, n as u64)) {
            Ok(r) => Check::new(name, r <= 1.0, format!("max value/(32 eps^2/d) = {r:.3}")),
            Err(e) => Check::new(name, false, e.to_string()),
        });
    }
    let enumeration = (|| -> Result<String> {
        let mut rng = stream_rng(seed, 8);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let rho = DensityMatrix::<f64>::random(1, &mut rng)?;
            let phi = random_unit_vector::<f64, _>(2, &mut rng);
            let a = exact_second_moment(1, eps, &rho, &phi)?;
            let b = second_moment_by_enumeration(1, eps, &rho, &phi)?;
            worst = worst.max((a - b).abs());
        }
        if worst > 1e-15 {
            return Err(Error::BoundViolated(format!("closed form and enumeration differ by {worst:.3e}")));
        }
        Ok(format!("max gap {worst:.3e}"))
    })();
    out.push(Check::from_result("second moment closed form vs enumeration n=1", enumeration));
    if n_max >= 2 {
        for m in [2, 3] {
            let name = format!("multi-use second moment n=2 m={m}");
            out.push(match multiuse_second_moment_mc(2, eps, m, 1000, derive_seed(seed, 200 + m as u64)) {
                Ok(e) => Check::new(
                    name,
                    !e.violated,
                    format!("{:.3e} ± {:.1e} vs bound {:.3e}", e.estimate, e.stderr, e.bound),
                ),
                Err(e) => Check::new(name, false, e.to_string()),
            });
        }
        let name = "gaussian POVM second moment n=2";
        let povm_check = (|| -> Result<String> {
            let (spec, _) = sample_hard_channel(Family::Gaussian, 2, 0.01, derive_seed(seed, 300))?;
            let mut rng = stream_rng(seed, 9);
            let mut worst = 0.0f64;
            for g in build_cover(2)? {
                let rho = DensityMatrix::<f64>::random(2, &mut rng)?;
                let meas = build_measurement::<f64>(&g)?;
                worst = worst.max(povm_second_moment_check(&spec, &rho, meas.povm())?);
            }
            Ok(format!("max {worst:.3e} vs 16 eps^2 = {:.3e}", 16.0 * 0.01 * 0.01))
        })();
        out.push(Check::from_result(name, povm_check));
    }
    let n_sep = n_max.min(3);
    let name = format!("rademacher separation n={n_sep}");
    out.push(match separation_statistics(Family::Rademacher, n_sep, 0.01, 50, derive_seed(seed, 400)) {
        Ok(r) => Check::new(
            name,
            r.fraction_below <= 0.05 || n_sep < 3,
            format!("mean TV {:.4} (2 eps = 0.02), fraction below eps {:.4}", r.mean_tv, r.fraction_below),
        ),
        Err(e) => Check::new(name, false, e.to_string()),
    });
    let name = "gaussian separation n=4";
    out.push(match separation_statistics(Family::Gaussian, 4, 1e-3, 50, derive_seed(seed, 401)) {
        Ok(r) => Check::new(name, r.mean_tv >= 7e-3 / 20.0, format!("mean TV {:.3e} vs 7 eps/20 = 3.5e-4", r.mean_tv)),
        Err(e) => Check::new(name, false, e.to_string()),
    });
    let fano = fano_bound(2.0).map(|v| (v + std::f64::consts::LN_2 / 3.0).abs());
    out.push(match fano {
        Ok(v) => Check::within("fano bound at M = 2", v, 1e-15),
        Err(e) => Check::new("fano bound at M = 2", false, e.to_string()),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!(parse_suites("all").unwrap().len(), 5);
        assert_eq!(parse_suites("cover").unwrap(), vec![Suite::Cover]);
        assert!(parse_suites("everything").is_err());
    }

    #[test]
    fn small_suites_pass() {
        for s in ALL_SUITES {
            let summary = run_suite(s, 2, 11);
            for c in &summary.checks {
                assert!(c.passed, "{}: {}", c.name, c.detail);
            }
        }
    }
}
