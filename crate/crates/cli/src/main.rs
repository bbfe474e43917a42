use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pauli_tomo::experiment::{
    init_thread_pool, run_cover, run_hard, run_learn, run_sweep, to_json, write_outputs, ExperimentKind, PartialConfig,
    SampleGrid, TruthSampler,
};
use pauli_tomo::hard::Family;
use pauli_tomo::verify::{parse_suites, run_verify};
use pauli_tomo::{Error, SampleRule};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Simulate and learn Pauli channels with stabilizer measurements.
///
/// Options may also come from a flat JSON file given with --config; flags
/// override the file. PAULI_TOMO_THREADS caps the worker pool.
#[derive(Parser)]
#[command(name = "pauli-tomo", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the stabilizer cover of the n-qubit Pauli group as JSON.
    Cover(RunArgs),
    /// Learn random channels and report the achieved TV distance per trial.
    Learn(RunArgs),
    /// Median TV error against per-group sample count, with a log-log fit.
    Sweep(RunArgs),
    /// Pairwise separation of a hard channel family.
    Hard(RunArgs),
    /// Run invariant suites and print a JSON summary.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of qubits.
    #[arg(long)]
    n: Option<usize>,
    /// Target TV accuracy (learn, sweep) or family perturbation (hard).
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Samples per group: box, proof, or custom:N.
    #[arg(long)]
    rule: Option<SampleRule>,
    /// Output directory. Without it the report is printed to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Hard family: rademacher or gaussian.
    #[arg(long)]
    family: Option<Family>,
    /// Sweep grid a:b:steps, log-spaced per-group sample counts.
    #[arg(long)]
    grid: Option<SampleGrid>,
    /// Truth sampler: dirichlet, identity, uniform, rademacher or gaussian.
    #[arg(long)]
    truth: Option<TruthSampler>,
    /// Perturbation size for rademacher/gaussian truths (defaults to --eps).
    #[arg(long)]
    truth_eps: Option<f64>,
    /// Number of hard-family instances.
    #[arg(long)]
    instances: Option<usize>,
    /// Channel file used as the truth of every learn trial.
    #[arg(long)]
    channel: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// all, algebra, cover, measurement, tomography or hard.
    #[arg(long)]
    suite: Option<String>,
    /// Largest qubit count exercised.
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(Error),
    Run(Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAILED),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILED)
        }
    }
}

fn load(file: Option<&PathBuf>, flags: PartialConfig) -> Result<PartialConfig, Failure> {
    let base = match file {
        Some(path) => PartialConfig::from_json_file(path).map_err(Failure::Usage)?,
        None => PartialConfig::default(),
    };
    Ok(base.overlay(flags))
}

fn flags(args: RunArgs) -> (Option<PathBuf>, PartialConfig) {
    let partial = PartialConfig {
        n: args.n,
        eps: args.eps,
        trials: args.trials,
        seed: args.seed,
        rule: args.rule,
        truth: args.truth,
        truth_eps: args.truth_eps,
        family: args.family,
        grid: args.grid,
        instances: args.instances,
        out: args.out,
        channel: args.channel,
        ..PartialConfig::default()
    };
    (args.config, partial)
}

/// Writes `files` under `out`, or prints the first one to stdout.
fn emit(out: Option<&PathBuf>, files: &[(&str, &str)]) -> Result<(), Failure> {
    match out {
        Some(dir) => {
            for path in write_outputs(dir, files).map_err(Failure::Run)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => print!("{}", files[0].1),
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<bool, Failure> {
    let (kind, args) = match command {
        Command::Verify(v) => return verify(v),
        Command::Cover(a) => (ExperimentKind::Cover, a),
        Command::Learn(a) => (ExperimentKind::Learn, a),
        Command::Sweep(a) => (ExperimentKind::Sweep, a),
        Command::Hard(a) => (ExperimentKind::Hard, a),
    };
    let (file, partial) = flags(args);
    let cfg = load(file.as_ref(), partial)?.resolve(kind).map_err(Failure::Usage)?;
    let out = cfg.out.clone();
    match kind {
        ExperimentKind::Cover => {
            let record = run_cover(&cfg).map_err(Failure::Run)?;
            emit(out.as_ref(), &[("cover.json", &to_json(&record).map_err(Failure::Run)?)])?;
            Ok(true)
        }
        ExperimentKind::Learn => {
            let report = run_learn(&cfg).map_err(Failure::Run)?;
            let a = &report.aggregates;
            eprintln!(
                "learn n={} eps={} rule={}: {}/{} trials within eps, Wilson 95% [{:.3}, {:.3}], median TV {:.4}, N_total {}",
                cfg.n,
                cfg.epsilon,
                cfg.rule,
                a.successes,
                report.records.len(),
                a.wilson_low,
                a.wilson_high,
                a.median_tv,
                report.records[0].n_total
            );
            let estimate = to_json(&report.first_estimate).map_err(Failure::Run)?;
            emit(
                out.as_ref(),
                &[
                    ("learn_report.json", &to_json(&report).map_err(Failure::Run)?),
                    ("learn_trials.csv", report.csv().as_str()),
                    ("learned_channel.json", &estimate),
                ],
            )?;
            Ok(report.passed)
        }
        ExperimentKind::Sweep => {
            let report = run_sweep(&cfg).map_err(Failure::Run)?;
            for p in &report.points {
                eprintln!("N={:>9} median TV {:.5} [{:.5}, {:.5}]", p.n_per_group, p.median_tv, p.q25, p.q75);
            }
            eprintln!("log-log slope {:.4}", report.slope);
            emit(
                out.as_ref(),
                &[
                    ("sweep_report.json", &to_json(&report).map_err(Failure::Run)?),
                    ("sweep.csv", report.csv().as_str()),
                ],
            )?;
            Ok(report.passed)
        }
        ExperimentKind::Hard => {
            let report = run_hard(&cfg).map_err(Failure::Run)?;
            let s = &report.separation;
            eprintln!(
                "{:?} n={} eps={}: {} pairs, min TV {:.4e}, mean TV {:.4e}, fraction below {:.4e}: {:.4}",
                cfg.family, cfg.n, cfg.epsilon, s.pair_count, s.min_tv, s.mean_tv, s.threshold, s.fraction_below
            );
            emit(
                out.as_ref(),
                &[
                    ("hard_report.json", &to_json(&report).map_err(Failure::Run)?),
                    ("hard_tv_histogram.csv", report.csv().as_str()),
                ],
            )?;
            Ok(report.passed)
        }
        ExperimentKind::Verify => unreachable!("handled above"),
    }
}

fn verify(args: VerifyArgs) -> Result<bool, Failure> {
    let partial =
        PartialConfig { suite: args.suite, n_max: args.n_max, seed: args.seed, out: args.out, ..Default::default() };
    let cfg = load(args.config.as_ref(), partial)?.resolve(ExperimentKind::Verify).map_err(Failure::Usage)?;
    let suites = parse_suites(&cfg.suite).map_err(Failure::Usage)?;
    let summary = run_verify(&suites, cfg.n_max, cfg.seed).map_err(Failure::Usage)?;
    for s in &summary.suites {
        for c in &s.checks {
            eprintln!("[{}] {:<12} {}: {}", if c.passed { "pass" } else { "FAIL" }, s.suite.name(), c.name, c.detail);
        }
    }
    eprintln!("verify finished in {:.1} s", summary.seconds);
    emit(cfg.out.as_ref(), &[("verify.json", &to_json(&summary).map_err(Failure::Run)?)])?;
    Ok(summary.passed)
}
