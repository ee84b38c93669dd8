use std::f64::consts::TAU;
use std::io;
use std::path::PathBuf;
use std::time::Instant;

use betafluct::circular::{cbe_points, count_arc, default_sine_n, sample_verblunsky, window_points};
use betafluct::gaussian::{cross_check, sample_tridiagonal, semicircle_residual};
use betafluct::stats::{centered_spans, cue_variance_oracle, default_xi_grid, tail_check, variance_scan, ScanSpec, SECOND_MOMENT_BOUND};
use betafluct::RngStream;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::grid::Grid;
use crate::output::{emit, read_manifest, write_manifest, Format, RunManifest};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "betafluct", version, about = "Number-variance experiments for circular and Gaussian beta ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Variance of circular-ensemble arc counts over a grid of scales x = n|I|.
    ScanCbe(CbeArgs),
    /// Variance of Gaussian-ensemble interval counts.
    ScanGbe(GbeArgs),
    /// Variance of Sine_beta window counts (0, x].
    ScanSine(SineArgs),
    /// Compare phase-sweep and Sturm eigenvalue counts on random matrices.
    VerifyCount(VerifyArgs),
    /// Upper tail and second moment of the Pruefer phase excursion.
    TailCheck(TailArgs),
    /// Table of the semicircle residual over mu/sqrt(n) and n.
    SemicircleResidual(SemicircleArgs),
    /// Exact number variance of the circular unitary ensemble.
    OracleCue(OracleArgs),
    /// Dump raw points, or counts on a grid, for a few draws.
    Sample(SampleArgs),
    /// Rerun the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Master seed; every replica draws from its own stream of it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads, 0 for one per core. Never changes the output.
    #[arg(long, env = "BETAFLUCT_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Output prefix: writes <out>.csv (or .json) and <out>.manifest.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Serialize)]
pub struct CbeArgs {
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Scales x = n|I|; default twelve geometric points from 1 to n/2.
    #[arg(long)]
    pub grid: Option<Grid>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct GbeArgs {
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 128)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Interval widths in units of 1/sqrt(n).
    #[arg(long, default_value = "1,8,64")]
    pub grid: Grid,
    /// Interval centers (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
    pub center: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SineArgs {
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Size of the approximating circular ensemble; default max(4096, 50 x_max).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Window lengths x.
    #[arg(long, default_value = "geom:1:80:12")]
    pub grid: Grid,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Number of random matrices.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Spectral parameters tried per matrix.
    #[arg(long, default_value_t = 50)]
    pub per_draw: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct TailArgs {
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Angle, at most 1/n; default 1/n.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Thresholds b.
    #[arg(long, default_value = "6,12,24,36")]
    pub grid: Grid,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SemicircleArgs {
    /// Matrix sizes (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000")]
    pub n: Vec<usize>,
    /// Values of mu/sqrt(n).
    #[arg(long, default_value = "0,0.5,1,1.5,1.9,2")]
    pub grid: Grid,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    /// Arc lengths L in [0, 2pi].
    #[arg(long, default_value = "0:6.283185307179586:9")]
    pub grid: Grid,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleEnsemble {
    Cbe,
    Gbe,
    Sine,
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = SampleEnsemble::Cbe)]
    pub ensemble: SampleEnsemble,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    /// Ensemble size; for sine, default max(4096, 50 x_max).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of draws.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    /// Window length for sine samples.
    #[arg(long, default_value_t = 20.0)]
    pub x_max: f64,
    /// Dump counts at these points instead of the points themselves
    /// (rescaled arcs (0, x] for cbe/sine, (-inf, x] for gbe).
    #[arg(long)]
    pub grid: Option<Grid>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ReplayArgs {
    /// A <prefix>.manifest.json written by an earlier run.
    pub manifest: PathBuf,
    /// New output prefix; default stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<betafluct::Error> for CliError {
    fn from(e: betafluct::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

struct Report {
    output: Option<PathBuf>,
    summary: Option<serde_json::Value>,
    exit: u8,
}

impl Report {
    fn table(output: Option<PathBuf>) -> Self {
        Self {
            output,
            summary: None,
            exit: EXIT_OK,
        }
    }
}

#[derive(Serialize)]
struct SemicircleRow {
    n: usize,
    mu_over_sqrt_n: f64,
    mu: f64,
    residual: f64,
}

#[derive(Serialize)]
struct OracleRow {
    n: usize,
    arc: f64,
    p: f64,
    variance: f64,
}

#[derive(Serialize)]
struct PointRow {
    draw: usize,
    index: usize,
    value: f64,
}

#[derive(Serialize)]
struct CountRow {
    draw: usize,
    x: f64,
    count: u64,
}

pub fn run(argv: Vec<String>) -> u8 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command, &argv) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, argv: &[String]) -> Result<u8, CliError> {
    let start = Instant::now();
    let (name, params, common, grid) = match &command {
        Command::ScanCbe(a) => ("scan-cbe", to_json(a), &a.common, a.grid.as_ref().map(|g| g.to_string())),
        Command::ScanGbe(a) => ("scan-gbe", to_json(a), &a.common, Some(a.grid.to_string())),
        Command::ScanSine(a) => ("scan-sine", to_json(a), &a.common, Some(a.grid.to_string())),
        Command::VerifyCount(a) => ("verify-count", to_json(a), &a.common, None),
        Command::TailCheck(a) => ("tail-check", to_json(a), &a.common, Some(a.grid.to_string())),
        Command::SemicircleResidual(a) => ("semicircle-residual", to_json(a), &a.common, Some(a.grid.to_string())),
        Command::OracleCue(a) => ("oracle-cue", to_json(a), &a.common, Some(a.grid.to_string())),
        Command::Sample(a) => ("sample", to_json(a), &a.common, a.grid.as_ref().map(|g| g.to_string())),
        Command::Replay(a) => return replay(a),
    };
    let report = match &command {
        Command::ScanCbe(a) => scan_cbe(a)?,
        Command::ScanGbe(a) => scan_gbe(a)?,
        Command::ScanSine(a) => scan_sine(a)?,
        Command::VerifyCount(a) => verify_count(a)?,
        Command::TailCheck(a) => tail(a)?,
        Command::SemicircleResidual(a) => semicircle(a)?,
        Command::OracleCue(a) => oracle(a)?,
        Command::Sample(a) => sample(a)?,
        Command::Replay(_) => unreachable!(),
    };
    if let Some(prefix) = &common.out {
        let manifest = RunManifest {
            command: name.to_string(),
            params,
            seed: common.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_secs: start.elapsed().as_secs_f64(),
            grid,
            argv: argv.to_vec(),
            output: report.output.clone(),
            summary: report.summary.clone(),
        };
        write_manifest(prefix, &manifest)?;
    }
    Ok(report.exit)
}

fn to_json<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

/// The recorded argv with its `--out` replaced.
fn replay_argv(recorded: &[String], out: Option<&PathBuf>) -> Vec<String> {
    let mut argv = Vec::with_capacity(recorded.len() + 2);
    let mut skip = false;
    for arg in recorded {
        if skip {
            skip = false;
            continue;
        }
        if arg == "--out" {
            skip = true;
            continue;
        }
        if arg.starts_with("--out=") {
            continue;
        }
        argv.push(arg.clone());
    }
    if let Some(out) = out {
        argv.push("--out".into());
        argv.push(out.display().to_string());
    }
    argv
}

fn replay(args: &ReplayArgs) -> Result<u8, CliError> {
    let manifest = read_manifest(&args.manifest)?;
    let argv = replay_argv(&manifest.argv, args.out.as_ref());
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::Usage(format!("manifest argv no longer parses: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Usage("a manifest cannot replay another replay".into()));
    }
    execute(cli.command, &argv)
}

fn scan_cbe(a: &CbeArgs) -> Result<Report, CliError> {
    let xs = match &a.grid {
        Some(g) => g.values().to_vec(),
        None => default_xi_grid(a.n)?,
    };
    let rows = variance_scan(&ScanSpec::circular(a.beta, a.n, &xs), a.samples, a.common.seed, a.common.workers)?;
    Ok(Report::table(emit(&rows, a.common.format, a.common.out.as_deref())?))
}

fn scan_gbe(a: &GbeArgs) -> Result<Report, CliError> {
    let spans: Vec<(f64, f64)> = a.center.iter().flat_map(|&c| centered_spans(a.n, c, a.grid.values())).collect();
    let rows = variance_scan(&ScanSpec::gaussian(a.beta, a.n, &spans), a.samples, a.common.seed, a.common.workers)?;
    Ok(Report::table(emit(&rows, a.common.format, a.common.out.as_deref())?))
}

fn scan_sine(a: &SineArgs) -> Result<Report, CliError> {
    let x_max = a.grid.values().iter().copied().fold(0.0, f64::max);
    let n = a.n.unwrap_or_else(|| default_sine_n(x_max));
    let rows = variance_scan(&ScanSpec::sine(a.beta, n, a.grid.values()), a.samples, a.common.seed, a.common.workers)?;
    Ok(Report::table(emit(&rows, a.common.format, a.common.out.as_deref())?))
}

fn verify_count(a: &VerifyArgs) -> Result<Report, CliError> {
    let report = cross_check(a.beta, a.n, a.samples, a.per_draw, a.common.seed, a.common.workers)?;
    let output = match &a.common.out {
        Some(_) => emit(&report.mismatches, a.common.format, a.common.out.as_deref())?,
        None => None,
    };
    println!(
        "{} evaluations, {} flagged near-degenerate, {} mismatches",
        report.evaluations,
        report.flagged,
        report.mismatches.len()
    );
    for m in &report.mismatches {
        eprintln!("mismatch: draw {} lambda {} sturm {} sweep {}", m.draw, m.lambda, m.sturm, m.sweep);
    }
    Ok(Report {
        output,
        summary: Some(serde_json::json!({
            "evaluations": report.evaluations,
            "flagged": report.flagged,
            "mismatches": report.mismatches.len(),
        })),
        exit: if report.mismatches.is_empty() { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn tail(a: &TailArgs) -> Result<Report, CliError> {
    if a.n == 0 {
        return Err(CliError::Usage("n must be at least 1".into()));
    }
    let theta = a.theta.unwrap_or(1.0 / a.n as f64);
    let report = tail_check(a.beta, a.n, theta, a.a, a.grid.values(), a.samples, a.common.seed, a.common.workers)?;
    let output = emit(&report.rows, a.common.format, a.common.out.as_deref())?;
    eprintln!(
        "E[(psi - a)^2] = {:.4} +- {:.4} (bound {SECOND_MOMENT_BOUND}), max excursion {:.4}",
        report.second_moment, report.second_moment_se, report.max_excursion
    );
    Ok(Report {
        output,
        summary: Some(serde_json::json!({
            "depth": report.depth,
            "theta": theta,
            "second_moment": report.second_moment,
            "second_moment_se": report.second_moment_se,
            "second_moment_bound": SECOND_MOMENT_BOUND,
            "max_excursion": report.max_excursion,
        })),
        exit: EXIT_OK,
    })
}

fn semicircle(a: &SemicircleArgs) -> Result<Report, CliError> {
    let mut rows = Vec::new();
    for &n in &a.n {
        for &r in a.grid.values() {
            let mu = r * (n as f64).sqrt();
            rows.push(SemicircleRow {
                n,
                mu_over_sqrt_n: r,
                mu,
                residual: semicircle_residual(mu, n)?,
            });
        }
    }
    Ok(Report::table(emit(&rows, a.common.format, a.common.out.as_deref())?))
}

fn oracle(a: &OracleArgs) -> Result<Report, CliError> {
    let rows = a
        .grid
        .values()
        .iter()
        .map(|&arc| {
            // the grid is typed in decimal, so let 2pi round down to the circle
            let arc = if arc > TAU && arc - TAU < 1e-4 { TAU } else { arc };
            Ok(OracleRow {
                n: a.n,
                arc,
                p: arc / TAU,
                variance: cue_variance_oracle(a.n, arc)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Report::table(emit(&rows, a.common.format, a.common.out.as_deref())?))
}

fn sample(a: &SampleArgs) -> Result<Report, CliError> {
    let seed = a.common.seed;
    let n = match (a.n, a.ensemble) {
        (Some(n), _) => n,
        (None, SampleEnsemble::Sine) => default_sine_n(a.x_max),
        (None, _) => 64,
    };
    let output = if let Some(grid) = &a.grid {
        let mut rows = Vec::new();
        for draw in 0..a.samples {
            let mut rng = RngStream::new(seed, draw as u64);
            match a.ensemble {
                SampleEnsemble::Cbe | SampleEnsemble::Sine => {
                    let d = sample_verblunsky(a.beta, n, &mut rng)?;
                    for &x in grid.values() {
                        rows.push(CountRow { draw, x, count: count_arc(&d, x)? });
                    }
                }
                SampleEnsemble::Gbe => {
                    let t = sample_tridiagonal(a.beta, n, &mut rng)?;
                    for &x in grid.values() {
                        rows.push(CountRow {
                            draw,
                            x,
                            count: t.sturm_count(x) as u64,
                        });
                    }
                }
            }
        }
        emit(&rows, a.common.format, a.common.out.as_deref())?
    } else {
        let mut rows = Vec::new();
        for draw in 0..a.samples {
            let mut rng = RngStream::new(seed, draw as u64);
            let values = match a.ensemble {
                SampleEnsemble::Cbe => cbe_points(&sample_verblunsky(a.beta, n, &mut rng)?).points,
                SampleEnsemble::Sine => {
                    if 10.0 * a.x_max > n as f64 {
                        return Err(CliError::Usage(format!("n = {n} too small for x_max = {}", a.x_max)));
                    }
                    window_points(&sample_verblunsky(a.beta, n, &mut rng)?, a.x_max)?.points
                }
                SampleEnsemble::Gbe => sample_tridiagonal(a.beta, n, &mut rng)?.eigenvalues(1e-12),
            };
            rows.extend(values.into_iter().enumerate().map(|(index, value)| PointRow { draw, index, value }));
        }
        emit(&rows, a.common.format, a.common.out.as_deref())?
    };
    Ok(Report::table(output))
}
