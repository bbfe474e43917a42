//! Seeded experiment runners behind the command-line tool.
//!
//! Every run is a pure function of its [`ExperimentConfig`]: trial `t` uses
//! the seed `derive_seed(seed, t)`, truth channels are drawn from stream 1
//! of that seed and the learner uses per-group seeds derived from it.
//! Reports serialize to JSON; tabular outputs are CSV files whose first line
//! is a `# schema: pauli-tomo/<table> v<version>` comment.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{tv_distance_raw, ChannelFile, PauliChannel};
use crate::cover::{build_cover, CoverRecord, StabilizerGroup, MAX_COVER_QUBITS};
use crate::error::{Error, Result};
use crate::hard::{
    check_family_epsilon, fano_bound_ln, random_dirichlet_channel, sample_hard_channel, separation_statistics, Family,
    SeparationReport,
};
use crate::pauli::MAX_SYMBOLIC_QUBITS;
use crate::rng::{derive_seed, stream_rng};
use crate::tomography::{learn_with_cover, SampleRule, TomographyConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CSV_SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "PAULI_TOMO_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Learn,
    Sweep,
    Hard,
    Cover,
    Verify,
}

/// Distribution the true channel of each trial is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthSampler {
    /// Symmetric Dirichlet(1) over the `d²` Pauli atoms.
    Dirichlet,
    Identity,
    Uniform,
    Rademacher,
    Gaussian,
}

impl FromStr for TruthSampler {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(Self::Dirichlet),
            "identity" => Ok(Self::Identity),
            "uniform" => Ok(Self::Uniform),
            "rademacher" => Ok(Self::Rademacher),
            "gaussian" => Ok(Self::Gaussian),
            other => Err(Error::InvalidArgument(format!("unknown truth sampler {other:?}"))),
        }
    }
}

/// `a:b:steps`, log-spaced per-group sample counts from `a` to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SampleGrid {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SampleGrid {
    /// Rounded grid points with duplicates removed.
    pub fn points(&self) -> Vec<u64> {
        let mut pts: Vec<u64> = if self.steps == 1 {
            vec![self.start.round() as u64]
        } else {
            let (la, lb) = (self.start.ln(), self.stop.ln());
            (0..self.steps)
                .map(|i| (la + (lb - la) * i as f64 / (self.steps - 1) as f64).exp().round() as u64)
                .collect()
        };
        pts.dedup();
        pts
    }
}

impl FromStr for SampleGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("grid must be a:b:steps with 1 <= a <= b, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, k] = parts[..] else { return Err(bad()) };
        let start: f64 = a.trim().parse().map_err(|_| bad())?;
        let stop: f64 = b.trim().parse().map_err(|_| bad())?;
        let steps: usize = k.trim().parse().map_err(|_| bad())?;
        if !(start >= 1.0 && stop >= start && stop.is_finite() && steps >= 1) {
            return Err(bad());
        }
        Ok(Self { start, stop, steps })
    }
}

impl TryFrom<String> for SampleGrid {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SampleGrid> for String {
    fn from(g: SampleGrid) -> Self {
        format!("{}:{}:{}", g.start, g.stop, g.steps)
    }
}

/// Config as read from a JSON file or from flags; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub kind: Option<ExperimentKind>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub rule: Option<SampleRule>,
    pub truth: Option<TruthSampler>,
    pub truth_eps: Option<f64>,
    pub family: Option<Family>,
    pub grid: Option<SampleGrid>,
    pub instances: Option<usize>,
    pub out: Option<PathBuf>,
    pub channel: Option<PathBuf>,
    pub suite: Option<String>,
    pub n_max: Option<usize>,
}

impl PartialConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    /// Fields set in `other` win.
    pub fn overlay(self, other: PartialConfig) -> Self {
        Self {
            kind: other.kind.or(self.kind),
            n: other.n.or(self.n),
            eps: other.eps.or(self.eps),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            rule: other.rule.or(self.rule),
            truth: other.truth.or(self.truth),
            truth_eps: other.truth_eps.or(self.truth_eps),
            family: other.family.or(self.family),
            grid: other.grid.or(self.grid),
            instances: other.instances.or(self.instances),
            out: other.out.or(self.out),
            channel: other.channel.or(self.channel),
            suite: other.suite.or(self.suite),
            n_max: other.n_max.or(self.n_max),
        }
    }

    /// Fills defaults for `kind` and validates.
    pub fn resolve(self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        if let Some(k) = self.kind {
            if k != kind {
                return Err(Error::InvalidArgument(format!("config is for {k:?}, not {kind:?}")));
            }
        }
        let family = self.family.unwrap_or(Family::Rademacher);
        let default_eps = match (kind, family) {
            (ExperimentKind::Hard, Family::Rademacher) => 0.05,
            (ExperimentKind::Hard, Family::Gaussian) => 1e-3,
            _ => 0.1,
        };
        let cfg = ExperimentConfig {
            kind,
            n: self.n.unwrap_or(2),
            epsilon: self.eps.unwrap_or(default_eps),
            trials: self.trials.unwrap_or(if kind == ExperimentKind::Sweep { 50 } else { 100 }),
            seed: self.seed.unwrap_or(0),
            rule: self.rule.unwrap_or(SampleRule::Proof),
            truth: self.truth.unwrap_or(TruthSampler::Dirichlet),
            truth_eps: self.truth_eps,
            family,
            grid: self.grid.unwrap_or(SampleGrid { start: 1e3, stop: 1e6, steps: 4 }),
            instances: self.instances.unwrap_or(200),
            out: self.out,
            channel: self.channel,
            suite: self.suite.unwrap_or_else(|| "all".into()),
            n_max: self.n_max.unwrap_or(3),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub rule: SampleRule,
    pub truth: TruthSampler,
    /// Perturbation size of hard-family truths; defaults to `epsilon`.
    pub truth_eps: Option<f64>,
    pub family: Family,
    pub grid: SampleGrid,
    pub instances: usize,
    /// Output directory; reports go to stdout when absent.
    pub out: Option<PathBuf>,
    /// Channel file used as the truth of every trial instead of `truth`.
    pub channel: Option<PathBuf>,
    pub suite: String,
    pub n_max: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let qubit_cap = match self.kind {
            ExperimentKind::Hard => MAX_SYMBOLIC_QUBITS,
            _ => MAX_COVER_QUBITS,
        };
        if self.n == 0 || self.n > qubit_cap {
            return Err(Error::QubitRange { n: self.n, min: 1, max: qubit_cap });
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        match self.kind {
            ExperimentKind::Learn | ExperimentKind::Sweep => {
                TomographyConfig::new(self.n, self.epsilon, self.rule, self.seed)?;
                if let Some(f) = self.truth_family() {
                    check_family_epsilon(f, self.n, self.truth_epsilon())?;
                }
                if let Some(ch) = self.fixed_truth()? {
                    if ch.n() != self.n {
                        return Err(Error::DimensionMismatch { expected: self.n, actual: ch.n() });
                    }
                }
            }
            ExperimentKind::Hard => {
                if self.epsilon <= 0.0 {
                    return Err(Error::EpsilonRange { epsilon: self.epsilon, range: "eps > 0".into() });
                }
                check_family_epsilon(self.family, self.n, self.epsilon)?;
                if self.instances < 2 {
                    return Err(Error::InvalidArgument("instances must be at least 2".into()));
                }
            }
            ExperimentKind::Cover | ExperimentKind::Verify => {}
        }
        if self.kind == ExperimentKind::Sweep && self.grid.points().len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "sweep grid {} has fewer than 3 distinct points",
                String::from(self.grid)
            )));
        }
        if let Some(dir) = &self.out {
            check_writable(dir)?;
        }
        Ok(())
    }

    fn truth_family(&self) -> Option<Family> {
        match self.truth {
            TruthSampler::Rademacher => Some(Family::Rademacher),
            TruthSampler::Gaussian => Some(Family::Gaussian),
            _ => None,
        }
    }

    fn truth_epsilon(&self) -> f64 {
        self.truth_eps.unwrap_or(self.epsilon)
    }

    /// The channel file named by `channel`, if any.
    pub fn fixed_truth(&self) -> Result<Option<PauliChannel<f64>>> {
        let Some(path) = &self.channel else { return Ok(None) };
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: ChannelFile =
            serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        PauliChannel::try_from(file).map(Some)
    }

    /// Truth channel drawn from `truth` for the trial with seed `trial_seed`.
    pub fn sample_truth(&self, trial_seed: u64) -> Result<PauliChannel<f64>> {
        let n = self.n;
        match self.truth {
            TruthSampler::Dirichlet => random_dirichlet_channel(n, &mut stream_rng(trial_seed, 1)),
            TruthSampler::Identity => PauliChannel::identity(n),
            TruthSampler::Uniform => PauliChannel::uniform(n),
            TruthSampler::Rademacher | TruthSampler::Gaussian => {
                let family = self.truth_family().expect("hard family");
                let seed = stream_rng(trial_seed, 1).random();
                Ok(sample_hard_channel(family, n, self.truth_epsilon(), seed)?.1)
            }
        }
    }
}

/// Creates `dir` if needed and confirms a file can be created inside it.
pub fn check_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::Io(format!("{} is not writable: {e}", dir.display())))?;
    Ok(())
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644))?;
    }
    tmp.persist(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

/// Caps the global rayon pool from `PAULI_TOMO_THREADS`. Returns the cap.
pub fn init_thread_pool() -> Result<Option<usize>> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(None) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool that is already up (tests, repeated calls) keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(Some(threads))
}

/// CSV text with the schema line and header.
pub struct CsvTable {
    text: String,
}

impl CsvTable {
    pub fn new(table: &str, header: &[&str]) -> Self {
        let mut t = Self { text: format!("# schema: pauli-tomo/{table} v{CSV_SCHEMA_VERSION}\n") };
        t.push_record(header);
        t
    }

    pub fn row(&mut self, fields: &[String]) {
        self.push_record(fields);
    }

    fn push_record<S: AsRef<[u8]>>(&mut self, fields: &[S]) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(fields).expect("in-memory write");
        let bytes = w.into_inner().expect("in-memory flush");
        self.text.push_str(std::str::from_utf8(&bytes).expect("fields are UTF-8"));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    quantile(&v, 0.5)
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + Z * Z / n;
    let center = (p + Z * Z / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + Z * Z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Percentile bootstrap 95% interval for the median.
pub fn bootstrap_median_ci(values: &[f64], resamples: usize, seed: u64) -> (f64, f64) {
    let mut rng = stream_rng(seed, 2);
    let k = values.len();
    let mut medians: Vec<f64> = (0..resamples)
        .map(|_| {
            let draw: Vec<f64> = (0..k).map(|_| values[rng.random_range(0..k)]).collect();
            median(&draw)
        })
        .collect();
    medians.sort_by(f64::total_cmp);
    (quantile(&medians, 0.025), quantile(&medians, 0.975))
}

/// Least-squares fit `y = intercept + slope·x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub n_total: u64,
    pub tv: f64,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnAggregates {
    pub successes: usize,
    pub success_rate: f64,
    pub median_tv: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl LearnAggregates {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let successes = records.iter().filter(|r| r.success).count();
        let tvs: Vec<f64> = records.iter().map(|r| r.tv).collect();
        let (wilson_low, wilson_high) = wilson_interval(successes, records.len());
        Self {
            successes,
            success_rate: successes as f64 / records.len() as f64,
            median_tv: median(&tvs),
            wilson_low,
            wilson_high,
        }
    }
}

/// Success probability the learner promises.
pub const LEARN_TARGET_RATE: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub samples_per_group: u64,
    pub rule_note: Option<String>,
    pub records: Vec<TrialRecord>,
    pub aggregates: LearnAggregates,
    /// Estimate produced by trial 0.
    pub first_estimate: ChannelFile,
    /// Success rate at least the promised 2/3.
    pub passed: bool,
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    pub fn csv(&self) -> CsvTable {
        let mut t = CsvTable::new("learn", &["trial", "seed", "n_total", "tv", "success"]);
        for r in &self.records {
            t.row(&[
                r.trial.to_string(),
                r.seed.to_string(),
                r.n_total.to_string(),
                r.tv.to_string(),
                r.success.to_string(),
            ]);
        }
        t
    }
}

/// One learning trial against `truth`. With `truth = cfg.sample_truth(trial_seed)`
/// (or the fixed channel file) the record is reproducible from the seed alone.
pub fn learn_trial(
    cfg: &ExperimentConfig,
    truth: &PauliChannel<f64>,
    groups: &[StabilizerGroup],
    rule: SampleRule,
    trial: usize,
    trial_seed: u64,
) -> Result<(TrialRecord, PauliChannel<f64>)> {
    let tcfg = TomographyConfig::new(cfg.n, cfg.epsilon, rule, trial_seed)?;
    let outcome = learn_with_cover(truth, &tcfg, groups)?;
    let tv = tv_distance_raw(truth.probs(), outcome.channel.probs());
    let record = TrialRecord {
        trial,
        seed: trial_seed,
        n_total: outcome.diagnostics.total_samples,
        tv,
        success: tv <= cfg.epsilon,
    };
    Ok((record, outcome.channel))
}

fn run_trials(
    cfg: &ExperimentConfig,
    groups: &[StabilizerGroup],
    rule: SampleRule,
    base_seed: u64,
) -> Result<(Vec<TrialRecord>, PauliChannel<f64>)> {
    let fixed = cfg.fixed_truth()?;
    let results: Vec<(TrialRecord, PauliChannel<f64>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(base_seed, t as u64);
            let truth = match &fixed {
                Some(ch) => ch.clone(),
                None => cfg.sample_truth(seed)?,
            };
            learn_trial(cfg, &truth, groups, rule, t, seed)
        })
        .collect::<Result<_>>()?;
    let first = results[0].1.clone();
    Ok((results.into_iter().map(|r| r.0).collect(), first))
}

pub fn run_learn(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let groups = build_cover(cfg.n)?;
    let tcfg = TomographyConfig::new(cfg.n, cfg.epsilon, cfg.rule, cfg.seed)?;
    let (records, first) = run_trials(cfg, &groups, cfg.rule, cfg.seed)?;
    let aggregates = LearnAggregates::from_records(&records);
    Ok(ExperimentReport {
        version: VERSION.into(),
        config: cfg.clone(),
        samples_per_group: tcfg.samples_per_group()?,
        rule_note: (cfg.rule == SampleRule::Boxed)
            .then(|| "box rule uses /(4 eps^2); the Hoeffding bound needs /(2 eps^2)".into()),
        passed: aggregates.success_rate >= LEARN_TARGET_RATE,
        aggregates,
        first_estimate: ChannelFile::from(&first),
        records,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub n_per_group: u64,
    pub n_total: u64,
    pub median_tv: f64,
    pub q25: f64,
    pub q75: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Acceptable range for the fitted log-log slope.
pub const SLOPE_RANGE: (f64, f64) = (-0.55, -0.45);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub points: Vec<SweepPoint>,
    pub slope: f64,
    pub intercept: f64,
    pub passed: bool,
    pub wall_clock_seconds: f64,
}

impl SweepReport {
    pub fn csv(&self) -> CsvTable {
        let mut t = CsvTable::new("sweep", &["N", "median_tv", "q25", "q75", "ci_low", "ci_high", "n_total"]);
        for p in &self.points {
            t.row(&[
                p.n_per_group.to_string(),
                p.median_tv.to_string(),
                p.q25.to_string(),
                p.q75.to_string(),
                p.ci_low.to_string(),
                p.ci_high.to_string(),
                p.n_total.to_string(),
            ]);
        }
        t
    }
}

/// Median TV error per grid point and the slope of `ln median` vs `ln N`.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let start = Instant::now();
    let grid = cfg.grid.points();
    if grid.len() < 3 {
        return Err(Error::InvalidArgument("sweep grid needs at least 3 distinct points".into()));
    }
    let groups = build_cover(cfg.n)?;
    let mut points = Vec::with_capacity(grid.len());
    for (i, &per_group) in grid.iter().enumerate() {
        let point_seed = derive_seed(cfg.seed, i as u64);
        let (records, _) = run_trials(cfg, &groups, SampleRule::Custom(per_group), point_seed)?;
        let mut tvs: Vec<f64> = records.iter().map(|r| r.tv).collect();
        tvs.sort_by(f64::total_cmp);
        let (ci_low, ci_high) = bootstrap_median_ci(&tvs, BOOTSTRAP_RESAMPLES, point_seed);
        points.push(SweepPoint {
            n_per_group: per_group,
            n_total: per_group * groups.len() as u64,
            median_tv: quantile(&tvs, 0.5),
            q25: quantile(&tvs, 0.25),
            q75: quantile(&tvs, 0.75),
            ci_low,
            ci_high,
        });
    }
    let x: Vec<f64> = points.iter().map(|p| (p.n_per_group as f64).ln()).collect();
    let y: Vec<f64> = points.iter().map(|p| p.median_tv.ln()).collect();
    let (slope, intercept) = linear_fit(&x, &y);
    Ok(SweepReport {
        version: VERSION.into(),
        config: cfg.clone(),
        points,
        slope,
        intercept,
        passed: (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

pub const HISTOGRAM_BINS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HardReport {
    pub version: String,
    pub config: ExperimentConfig,
    pub separation: SeparationReport,
    /// `ln M` for the family: `(d²/2) ln 2` sign patterns for Rademacher.
    pub ln_family_size: Option<f64>,
    /// `(2/3) ln M − ln 2` nats a decoder must extract.
    pub fano_requirement: Option<f64>,
    /// Rademacher: at most 5% of pairs below `ε`. Gaussian: mean TV at least `7ε/20`.
    pub passed: bool,
    pub histogram: Vec<(f64, f64, usize)>,
    pub wall_clock_seconds: f64,
}

impl HardReport {
    pub fn csv(&self) -> CsvTable {
        let mut t = CsvTable::new("hard-tv-histogram", &["bin_low", "bin_high", "count"]);
        for (lo, hi, c) in &self.histogram {
            t.row(&[lo.to_string(), hi.to_string(), c.to_string()]);
        }
        t
    }
}

fn histogram(values: &[f64], bins: usize) -> Vec<(f64, f64, usize)> {
    let max = values.iter().copied().fold(0.0, f64::max);
    let width = if max > 0.0 { max / bins as f64 } else { 1.0 };
    let mut counts = vec![0usize; bins];
    for &v in values {
        counts[((v / width) as usize).min(bins - 1)] += 1;
    }
    counts.into_iter().enumerate().map(|(i, c)| (i as f64 * width, (i + 1) as f64 * width, c)).collect()
}

pub fn run_hard(cfg: &ExperimentConfig) -> Result<HardReport> {
    let start = Instant::now();
    let sep = separation_statistics(cfg.family, cfg.n, cfg.epsilon, cfg.instances, cfg.seed)?;
    let passed = match cfg.family {
        Family::Rademacher => sep.fraction_below <= 0.05,
        Family::Gaussian => sep.mean_tv >= 7.0 * cfg.epsilon / 20.0,
    };
    let ln_family_size =
        (cfg.family == Family::Rademacher).then(|| (1u64 << (2 * cfg.n)) as f64 / 2.0 * std::f64::consts::LN_2);
    Ok(HardReport {
        version: VERSION.into(),
        config: cfg.clone(),
        histogram: histogram(&sep.tv_values, HISTOGRAM_BINS),
        separation: sep,
        fano_requirement: ln_family_size.map(fano_bound_ln),
        ln_family_size,
        passed,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_cover(cfg: &ExperimentConfig) -> Result<CoverRecord> {
    Ok(CoverRecord::new(cfg.n, &build_cover(cfg.n)?))
}

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes `files` (name, contents) into `dir` atomically; returns the paths.
pub fn write_outputs(dir: &Path, files: &[(&str, &str)]) -> Result<Vec<PathBuf>> {
    check_writable(dir)?;
    files
        .iter()
        .map(|(name, contents)| {
            let path = dir.join(name);
            write_atomic(&path, contents.as_bytes())?;
            Ok(path)
        })
        .collect()
}
