//! Command-line front end: `eval`, `saddles`, `stokes`, `table`, `paths`.

pub mod commands;
pub mod golden;
pub mod report;
pub mod tables;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::saddle::{theta_from_fraction, ExpansionParams, SaddleGeometry};
use crate::series::AssemblyMode;

pub use report::{NumberStyle, OutputFormat, Report};

#[derive(Debug, Parser)]
#[command(name = "touchard", version, about = "Touchard polynomials: exact values and large-order asymptotics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Exact and asymptotic T_{n-1}(z)/(n-1)!, with the relative error.
    Eval,
    /// Saddle locations, estimates, residuals and contributory flags.
    Saddles,
    /// Stokes angle for mu's interval, or the interval boundaries.
    Stokes,
    /// Regenerate a reference table with deviations from the printed values.
    Table,
    /// Steepest descent/ascent polylines as CSV files plus a JSON manifest.
    Paths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Reduced,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Order n (the value computed is T_{n-1}).
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Modulus of z.
    #[arg(long, global = true)]
    pub x: Option<f64>,
    /// arg z divided by pi, in [0, 1].
    #[arg(long = "theta-over-pi", global = true, default_value_t = 0.0)]
    pub theta_over_pi: f64,
    /// mu = n/x directly, for saddles/stokes/paths.
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// Last series index kept.
    #[arg(long, global = true, default_value_t = 2)]
    pub truncation: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Significant digits in printed numbers.
    #[arg(long, global = true, env = "TOUCHARD_PRECISION", default_value_t = 12)]
    pub precision: usize,
    /// Lowest saddle index shown by `saddles` and traced by `paths`
    #[arg(long = "k-min", global = true, allow_negative_numbers = true)]
    pub k_min: Option<i64>,
    /// Highest saddle index shown by `saddles` and traced by `paths`
    #[arg(long = "k-max", global = true, allow_negative_numbers = true)]
    pub k_max: Option<i64>,
    /// With `paths`: directory for the CSV files and manifest.json
    #[arg(long = "out-dir", global = true)]
    pub out_dir: Option<PathBuf>,
    /// With `stokes`: print mu_1 .. mu_8.
    #[arg(long, global = true)]
    pub boundaries: bool,
    /// With `table`: one of 1, 2, 4, 5, 6, 7, 8.
    #[arg(long, global = true)]
    pub id: Option<u32>,
    /// Which saddles `eval` sums.
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Reduced)]
    pub mode: ModeArg,
}

/// Validated configuration for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: Option<u32>,
    pub x: Option<f64>,
    pub theta_over_pi: f64,
    pub mu: Option<f64>,
    pub truncation: usize,
    pub output_format: OutputFormat,
    pub precision_digits: usize,
    pub k_window: Option<(i64, i64)>,
    pub out_dir: Option<PathBuf>,
    pub boundaries: bool,
    pub table_id: Option<u32>,
    pub mode: AssemblyMode,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let c = &cli.common;
        if !(0.0..=1.0).contains(&c.theta_over_pi) {
            return Err(Error::InvalidParameter(format!(
                "--theta-over-pi must lie in [0, 1], got {}",
                c.theta_over_pi
            )));
        }
        if c.precision == 0 || c.precision > 17 {
            return Err(Error::InvalidParameter(format!(
                "precision must be 1..=17 digits, got {}",
                c.precision
            )));
        }
        let k_window = match (c.k_min, c.k_max) {
            (None, None) => None,
            (lo, hi) => {
                let lo = lo.unwrap_or(-3);
                let hi = hi.unwrap_or(3);
                if lo > hi {
                    return Err(Error::InvalidParameter(format!("empty window [{lo}, {hi}]")));
                }
                Some((lo, hi))
            }
        };
        Ok(RunConfig {
            command: cli.command,
            n: c.n,
            x: c.x,
            theta_over_pi: c.theta_over_pi,
            mu: c.mu,
            truncation: c.truncation,
            output_format: c.format,
            precision_digits: c.precision,
            k_window,
            out_dir: c.out_dir.clone(),
            boundaries: c.boundaries,
            table_id: c.id,
            mode: match c.mode {
                ModeArg::Reduced => AssemblyMode::Reduced,
                ModeArg::Full => AssemblyMode::Full,
            },
        })
    }

    pub fn style(&self) -> NumberStyle {
        NumberStyle {
            digits: self.precision_digits,
            format: self.output_format,
        }
    }

    pub fn theta(&self) -> f64 {
        theta_from_fraction(self.theta_over_pi)
    }

    /// `(n, x, theta)`; both `--n` and `--x` are required.
    pub fn params(&self) -> Result<ExpansionParams> {
        match (self.n, self.x) {
            (Some(n), Some(x)) => ExpansionParams::new(n, x, self.theta()),
            _ => Err(Error::InvalidParameter("--n and --x are required".into())),
        }
    }

    /// `mu` from `--mu`, else from `n/x`.
    pub fn geometry(&self) -> Result<SaddleGeometry> {
        let mu = match (self.mu, self.n, self.x) {
            (Some(mu), _, _) => mu,
            (None, Some(n), Some(x)) => n as f64 / x,
            _ => {
                return Err(Error::InvalidParameter("give --mu, or --n and --x".into()));
            }
        };
        SaddleGeometry::new(mu, self.theta())
    }
}

/// Result of a command: rendered output and whether any part failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub failed: bool,
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    match config.command {
        CommandKind::Eval => commands::cmd_eval(config),
        CommandKind::Saddles => commands::cmd_saddles(config),
        CommandKind::Stokes => commands::cmd_stokes(config),
        CommandKind::Table => tables::cmd_table(config),
        CommandKind::Paths => commands::cmd_paths(config),
    }
}

/// Parses `args`, runs, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(out) => {
            print!("{}", out.output);
            i32::from(out.failed)
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
