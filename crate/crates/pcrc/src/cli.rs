//! `pcrc` subcommands.
//!
//! Exit codes: 0 success, 1 config or argument error, 2 domain violation,
//! 3 I/O error, 4 simulation verification failure.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use pcrc_core::mcsim::{
    simulate_signals_with, verify_cross_correlation, verify_epi_residual, verify_sinr,
    AnalyticStages, SimConfig, SimStats, VerificationReport,
};
use pcrc_core::optimize::{
    check_lemma5_with, check_lemma6_with, check_lemma7_with, check_remark1, maximize_weighted_with,
    optimality_report_with, remark1_terms, OptimalityReport, OptimizeError,
};
use pcrc_core::regions::{boundary_sample_with, RegionError, RegionTable};
use pcrc_core::{BoundKind, ChannelParams, PowerSplit, SplitGrid, SupportResult};
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, Format, RunConfig};
use crate::exec::Rayon;
use crate::output::{region_csv, to_json, RegionRow};
use crate::plot::{pareto_frontier, render_svg};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Domain(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<RegionError> for CliError {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::InvalidGrid | RegionError::TooFewDirections { .. } => {
                CliError::Usage(e.to_string())
            }
            RegionError::WeakInterferenceRequired { .. } => CliError::Domain(e.to_string()),
        }
    }
}

impl From<OptimizeError> for CliError {
    fn from(e: OptimizeError) -> Self {
        match e {
            OptimizeError::Region(r) => r.into(),
            OptimizeError::PreconditionViolated(_) => CliError::Domain(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pcrc",
    version,
    about = "Rate-region bounds for the partially cognitive Gaussian interference channel"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Outer,
    Inner,
}

impl From<KindArg> for BoundKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Outer => BoundKind::Outer,
            KindArg::Inner => BoundKind::Inner,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Svg => Format::Svg,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertices of every per-split region on the grid (CSV or JSON).
    Region {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "outer")]
        kind: KindArg,
    },
    /// Weighted-sum maximum and the optimality report.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Evaluate one optimality condition.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "lemma")]
        remark1: bool,
        #[arg(long, value_parser = clap::value_parser!(u8).range(5..=7))]
        lemma: Option<u8>,
    },
    /// Monte Carlo check of the signalling statistics.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// SVG of the (R0 + R1, R2) trade-off, inner and outer.
    Plot {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Remark1Output {
    pub split: PowerSplit,
    pub left: f64,
    pub right: f64,
    pub remark1_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOutput {
    pub channel: ChannelParams,
    pub grid: SplitGrid,
    pub kind: BoundKind,
    pub maximum: SupportResult,
    /// Absent when the outer bound is unavailable (`|b| >= 1`).
    pub report: Option<OptimalityReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub config: SimConfig,
    pub analytic: AnalyticStages,
    pub stats: SimStats,
    pub sinr: VerificationReport,
    pub epi_residual: VerificationReport,
    pub cross_correlation: VerificationReport,
    pub passed: bool,
}

struct Context {
    cfg: RunConfig,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Context {
    fn load(common: &Common) -> Result<Self, CliError> {
        let mut cfg = RunConfig::load(&common.config)?;
        cfg.override_split(common.alpha, common.beta)?;
        if let Some(seed) = common.seed {
            cfg.sim.seed = seed;
        }
        if let Some(samples) = common.samples {
            if samples == 0 {
                return Err(CliError::Usage("--samples must be >= 1".into()));
            }
            cfg.sim.samples = samples;
        }
        let out = common.out.clone().or_else(|| cfg.output.path.clone());
        let format = common.format.map(Format::from).or(cfg.output.format);
        Ok(Context { cfg, out, format })
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(CliError::Usage(format!(
                "format {f:?} is not supported by this subcommand"
            )))
        }
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => write_file(path, text),
            None => {
                let mut stdout = std::io::stdout().lock();
                match stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                {
                    // reader went away (`| head`): not an error
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    other => other.map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    }),
                }
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        self.format(Format::Json, &[Format::Json])?;
        let text = to_json(value).map_err(|e| CliError::Usage(e.to_string()))?;
        self.emit(&text)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn region(ctx: &Context, kind: BoundKind) -> Result<(), CliError> {
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    let pts = boundary_sample_with(&ctx.cfg.channel, kind, ctx.cfg.grid, &Rayon)?;
    let rows: Vec<RegionRow> = pts
        .into_iter()
        .map(|(sp, pt)| RegionRow::new(sp, pt, kind))
        .collect();
    match format {
        Format::Csv => ctx.emit(&region_csv(&rows)),
        _ => ctx.emit_json(&rows),
    }
}

fn optimize(ctx: &Context, kind: Option<BoundKind>) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let weak = cfg.channel.weak_interference();
    let kind = kind.unwrap_or(if weak {
        BoundKind::Outer
    } else {
        BoundKind::Inner
    });
    let maximum = maximize_weighted_with(&cfg.channel, &cfg.weights, kind, cfg.grid, &Rayon)?;
    let report = if weak {
        Some(optimality_report_with(
            &cfg.channel,
            &cfg.weights,
            cfg.grid,
            &Rayon,
        )?)
    } else {
        None
    };
    ctx.emit_json(&OptimizeOutput {
        channel: cfg.channel,
        grid: cfg.grid,
        kind,
        maximum,
        report,
    })
}

fn check(ctx: &Context, remark1: bool, lemma: Option<u8>) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    match (remark1, lemma) {
        (true, _) => {
            let terms = remark1_terms(&cfg.channel, cfg.split);
            ctx.emit_json(&Remark1Output {
                split: cfg.split,
                left: terms.left,
                right: terms.right,
                remark1_holds: check_remark1(&cfg.channel, cfg.split),
            })
        }
        (false, Some(5)) => ctx.emit_json(&check_lemma5_with(
            &cfg.channel,
            &cfg.weights,
            cfg.grid,
            &Rayon,
        )?),
        (false, Some(6)) => ctx.emit_json(&check_lemma6_with(
            &cfg.channel,
            &cfg.weights,
            cfg.grid,
            &Rayon,
        )?),
        (false, Some(7)) => ctx.emit_json(&check_lemma7_with(
            &cfg.channel,
            &cfg.weights,
            cfg.grid,
            &Rayon,
        )?),
        _ => Err(CliError::Usage(
            "check needs --remark1 or --lemma 5|6|7".into(),
        )),
    }
}

fn simulate(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let sim = SimConfig::new(cfg.channel, cfg.split, cfg.sim.samples, cfg.sim.seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let stats = simulate_signals_with(&sim, &Rayon);
    let sinr = verify_sinr(&stats, &cfg.channel, &cfg.split);
    let epi_residual = verify_epi_residual(&stats, &cfg.channel, &cfg.split);
    let cross_correlation = verify_cross_correlation(&stats, &cfg.channel, &cfg.split);
    let first_failure = [&sinr, &epi_residual, &cross_correlation]
        .iter()
        .find_map(|r| r.ensure().err());
    let output = SimulateOutput {
        config: sim,
        analytic: AnalyticStages::new(&cfg.channel, &cfg.split),
        stats,
        passed: first_failure.is_none(),
        sinr,
        epi_residual,
        cross_correlation,
    };
    ctx.emit_json(&output)?;
    match first_failure {
        Some(e) => Err(CliError::Verification(e.to_string())),
        None => Ok(()),
    }
}

fn plot(ctx: &Context) -> Result<(), CliError> {
    ctx.format(Format::Svg, &[Format::Svg])?;
    let cfg = &ctx.cfg;
    let mut curves = Vec::new();
    for kind in [BoundKind::Outer, BoundKind::Inner] {
        let table = RegionTable::with_executor(&cfg.channel, kind, cfg.grid, &Rayon)?;
        curves.push((kind, pareto_frontier(&table)));
    }
    let ch = &cfg.channel;
    let title = format!(
        "a={} b={} P1={} P2={} mu={}",
        ch.a(),
        ch.b(),
        ch.p1(),
        ch.p2(),
        ch.mu()
    );
    ctx.emit(&render_svg(&curves, &title))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Region { common, kind } => region(&Context::load(&common)?, kind.into()),
        Command::Optimize { common, kind } => {
            optimize(&Context::load(&common)?, kind.map(Into::into))
        }
        Command::Check {
            common,
            remark1,
            lemma,
        } => check(&Context::load(&common)?, remark1, lemma),
        Command::Simulate { common } => simulate(&Context::load(&common)?),
        Command::Plot { common } => plot(&Context::load(&common)?),
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("pcrc: {e}");
            e.exit_code()
        }
    }
}
